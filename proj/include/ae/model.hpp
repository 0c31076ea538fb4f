// The homogeneous flat model realized on a single 5-dimensional chart with a
// constant split-signature metric.  Because the Schouten tensor vanishes, the
// tractor connection has polynomial parallel sections: a 7x7 frame matrix
// F(x) with F(x) F(y) = F(x+y) transports the fiber at the origin to any
// chart point.  Parallel scales and parallel 3-forms therefore have exact
// closed forms, which makes the flat model the calibration ground for every
// slot and sign convention in the chart-level calculus: splitting operators
// applied to the bottom slot of a parallel object must reproduce the whole
// object, normality residuals must vanish identically, and pointwise chart
// classification must agree with ray classification in the fiber.
#pragma once

#include <array>

#include "ae/chart.hpp"
#include "ae/g2.hpp"

namespace ae {

// Constant metric with hyperbolic pairs (x1,x4), (x2,x5) and a minus sign on
// x3 (0-based: pairs (0,3), (1,4) and -1 at (2,2)); its tractor extension is
// exactly the standard 7-dimensional fiber metric.
inline Matrix<Jet> flat_metric5() {
    Matrix<Jet> g(kJetVars, kJetVars);
    g(0, 3) = Jet(1.0);
    g(3, 0) = Jet(1.0);
    g(1, 4) = Jet(1.0);
    g(4, 1) = Jet(1.0);
    g(2, 2) = Jet(-1.0);
    return g;
}

inline Chart flat_model_chart() {
    Chart c;
    c.name = "flat-model";
    c.metric = [](const JetArgs&) { return flat_metric5(); };
    return c;
}

inline Jet flat_norm2(const JetArgs& x) {
    Matrix<Jet> g = flat_metric5();
    Jet r(0.0);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) r += g(a, b) * x[a] * x[b];
    return r;
}

// Parallel frame in fiber slot order (rho, mu^a, sigma): F(x) maps the fiber
// components of a parallel section at the origin to its components at x.
inline Matrix<Jet> flat_frame(const JetArgs& x) {
    Matrix<Jet> g = flat_metric5();
    Matrix<Jet> F(7, 7);
    F(0, 0) = Jet(1.0);
    F(6, 6) = Jet(1.0);
    for (int a = 0; a < kJetVars; ++a) {
        F(1 + a, 1 + a) = Jet(1.0);
        F(1 + a, 0) = -x[a];
        for (int b = 0; b < kJetVars; ++b) F(6, 1 + b) += g(b, a) * x[a];
    }
    F(6, 0) = -0.5 * flat_norm2(x);
    return F;
}
inline Matrix<Jet> flat_frame_inverse(const JetArgs& x) {
    JetArgs mx;
    for (int i = 0; i < kJetVars; ++i) mx[i] = -x[i];
    return flat_frame(mx);
}

// The parallel scale with fiber data S0 = (rho0, mu0^a, sigma0) at the
// origin: sigma(x) = sigma0 + (mu0)_b x^b - (1/2) rho0 |x|^2.
inline Jet flat_sigma(const std::array<double, 7>& S0, const JetArgs& x) {
    Matrix<Jet> g = flat_metric5();
    Jet s(S0[6]);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) s += g(a, b) * S0[1 + a] * x[b];
    s -= 0.5 * S0[0] * flat_norm2(x);
    return s;
}

// Determinant by Leibniz expansion; safe for jet entries whose values vanish
// at the base point (where pivoted elimination would fail).
inline Jet det_leibniz(const Matrix<Jet>& m) {
    int n = m.rows;
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    Jet det(0.0);
    do {
        std::vector<int> q = p;
        int sgn = sort_with_sign(q);
        Jet term(1.0);
        for (int i = 0; i < n; ++i) term = term * m(i, p[i]);
        det += (sgn > 0) ? term : -term;
    } while (std::next_permutation(p.begin(), p.end()));
    return det;
}

// Pullback of a covariant k-form by a linear map: (M^* a)_I = a_J det M[J,I].
inline KForm<Jet> pullback_form(const Matrix<Jet>& M, const KForm<Jet>& a) {
    int n = a.n;
    KForm<Jet> r(n, a.degree);
    auto subs = increasing_subsets(n, a.degree);
    for (size_t ri = 0; ri < subs.size(); ++ri) {
        Jet acc(0.0);
        for (size_t rj = 0; rj < subs.size(); ++rj) {
            if (a.comp[rj].is_zero()) continue;
            Matrix<Jet> minor(a.degree, a.degree);
            for (int p = 0; p < a.degree; ++p)
                for (int q = 0; q < a.degree; ++q) minor(p, q) = M(subs[rj][p], subs[ri][q]);
            acc += a.comp[rj] * det_leibniz(minor);
        }
        r.comp[ri] = acc;
    }
    return r;
}

inline KForm<Jet> kform_to_jet(const KForm<double>& a) {
    KForm<Jet> r(a.n, a.degree);
    for (size_t i = 0; i < a.comp.size(); ++i) r.comp[i] = Jet(a.comp[i]);
    return r;
}
inline Vec<Jet> vec_to_jet(const Vec<double>& v) {
    Vec<Jet> r(v.dim());
    for (int i = 0; i < v.dim(); ++i) r[i] = Jet(v[i]);
    return r;
}

// The parallel extension of a covariant tractor 3-form with components Phi0
// at the origin: components at x are the pullback by F(x)^{-1} = F(-x).
inline KForm<Jet> flat_parallel_3form(const KForm<Jet>& Phi0, const JetArgs& x) {
    return pullback_form(flat_frame_inverse(x), Phi0);
}
inline Vec<Jet> flat_parallel_tractor(const Vec<Jet>& S0, const JetArgs& x) {
    return flat_frame(x) * S0;
}

// Chart point <-> isotropic ray: the canonical tractor of the point x has
// components (1, x^a, -1/2 |x|^2) in the parallel frame.
inline Vec<double> flat_ray_of_point(const Point& pt) {
    JetArgs x = seed_point(pt, 0);
    Vec<double> r(7);
    r[0] = 1.0;
    for (int a = 0; a < kJetVars; ++a) r[1 + a] = pt[a];
    r[6] = -0.5 * flat_norm2(x).value();
    return r;
}
// Inverse on rays with a nonvanishing rho-component.
inline Point flat_point_of_ray(const Vec<double>& ray) {
    if (ray[0] == 0.0) throw std::invalid_argument("flat_point_of_ray: ray at infinity");
    Point p;
    for (int a = 0; a < kJetVars; ++a) p[a] = ray[1 + a] / ray[0];
    return p;
}

// Representative parallel scales for the three causality types
// (eps = -H(S,S)); the base point of each listed chart point has the
// indicated curved-orbit behaviour.
inline std::array<double, 7> flat_scale_representative(int eps) {
    switch (eps) {
        case 1:
            return {0, 0, 0, 1, 0, 0, 0};  // mu0 along the negative direction
        case -1:
            return {0, 1, 0, 0, 0.5, 0, 0};
        case 0:
            return {1, 0, 0, 0, 0, 0, 0};  // sigma = -1/2 |x|^2
        default:
            throw std::invalid_argument("flat_scale_representative: eps must be -1, 0, or 1");
    }
}

// The sigma-scale chart on the open orbit: metric sigma^{-2} g_flat.  Weighted
// quantities trivialized in the flat chart convert to the sigma-scale
// trivialization by sigma^{-w}.
inline Chart flat_sigma_scale_chart(const std::array<double, 7>& S0) {
    Chart c;
    c.name = "flat-model-sigma-scale";
    c.metric = [S0](const JetArgs& x) {
        Jet s = flat_sigma(S0, x);
        Jet f = 1.0 / (s * s);
        Matrix<Jet> g = flat_metric5();
        for (Jet& e : g.data) e = f * e;
        return g;
    };
    return c;
}

}  // namespace ae
