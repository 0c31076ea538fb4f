// Explicit example geometries packaged as charts with their distinguished
// scales, distribution spans, and symmetry fields, plus one-command
// verification sweeps that evaluate every advertised identity at sampled
// points and emit a structured report.
#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ae/chart.hpp"

namespace ae {

struct GalleryExample {
    std::string name;
    // The representative chart used for verification (for the rolling-type
    // examples this is the Einstein representative of the conformal class,
    // i.e., the negative of the displayed product metric).
    Chart chart;
    std::map<std::string, ScalarField> scalars;
    std::map<std::string, VectorField> vectors;
    // Draws a point inside the nonsingular sampling domain.
    std::function<Point(std::mt19937&)> sample;
    int eps = 0;  // causality type of the distinguished scale (0 = Ricci-flat)
};

GalleryExample load_example(const std::string& name);

struct CheckResult {
    std::string id;
    std::string ref;  // self-describing provenance string for the check
    double max_residual = 0;
    double tolerance = 0;
    bool pass = false;
};

struct VerificationReport {
    std::string example;
    unsigned seed = 0;
    int points = 0;
    std::vector<CheckResult> checks;
    bool overall = false;

    nlohmann::ordered_json to_json() const;
};

struct VerifyOptions {
    int points = 20;
    unsigned seed = 20260823u;
    double tol2 = 1e-8;        // order <= 2 identities
    double tol3 = 1e-5;        // identities needing third derivatives
    double tol_theta = 1e-6;   // almost-Einstein and Killing residuals
    std::vector<double> upsilon = {0.0, 1.0, 1.5707963267948966};  // rolling
    double t = 0.3;            // family parameter (dirichlet)
    std::vector<double> submaximal_I = {-0.75, 0.0, 1.0, 2.0};
    bool inject_bad_scale = false;  // submaximal expected-fail fixture
};

VerificationReport verify_example(const std::string& name, const VerifyOptions& opt = {});

}  // namespace ae
