// Implementation of the example gallery: chart data for the explicit
// geometries and the verification sweeps behind `gallery verify`.
//
// Convention notes.  Each example leaves a small number of global signs
// genuinely open (orientation of the chart volume form, orientation of the
// distinguished symmetry field); these are frozen here as named constants,
// chosen once so that the orientation identity
//   eps_g = 15 phi_[ab theta_c psi_de]
// holds, and every other identity is then checked against that same choice.
#include "ae/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "ae/model.hpp"

namespace ae {
namespace {

// ---------------------------------------------------------------------------
// Residual bookkeeping.

struct Checker {
    std::vector<CheckResult> list;
    std::map<std::string, size_t> index;

    void add(const std::string& id, const std::string& ref, double tol, double residual) {
        auto it = index.find(id);
        if (it == index.end()) {
            index[id] = list.size();
            list.push_back({id, ref, residual, tol, residual <= tol});
        } else {
            CheckResult& c = list[it->second];
            c.max_residual = std::max(c.max_residual, residual);
            c.pass = c.max_residual <= c.tolerance;
        }
    }
    // Boolean check: residual 0 when the condition holds, 1 when violated.
    void require(const std::string& id, const std::string& ref, bool ok) {
        add(id, ref, 0.5, ok ? 0.0 : 1.0);
    }
    bool overall() const {
        for (const CheckResult& c : list)
            if (!c.pass) return false;
        return true;
    }
};

double rel(double residual, double scale) { return residual / (1.0 + scale); }

std::vector<Point> sorted_samples(const GalleryExample& ex, int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::vector<Point> pts;
    int guard = 0;
    while (static_cast<int>(pts.size()) < n) {
        if (++guard > 1000 * (n + 1))
            throw std::runtime_error("sorted_samples: sampling domain too restrictive");
        Point p = ex.sample(rng);
        if (ex.chart.domain(p)) pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

double uni(std::mt19937& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Matrix<Jet> form_to_matrix(const KForm<Jet>& f) {
    Matrix<Jet> m(kJetVars, kJetVars);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b)
            if (a != b) m(a, b) = f.component({a, b});
    return m;
}

Vec<Jet> apply_form(const ChartGeometry& G, const KForm<Jet>& f, const Vec<Jet>& u) {
    // (f-sharp u)^a = g^{ab} f_{bc} u^c
    Vec<Jet> r(kJetVars);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b)
            for (int c = 0; c < kJetVars; ++c)
                r[a] += G.ginv(a, b) * f.component({b, c}) * u[c];
    return r;
}

Jet metric_pair(const ChartGeometry& G, const Vec<Jet>& u, const Vec<Jet>& v) {
    Jet s(0.0);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) s += G.g(a, b) * u[a] * v[b];
    return s;
}

KForm<Jet> volume_form(const ChartGeometry& G, double orient) {
    Jet d = matrix_det(G.g);
    Jet ad = d.value() < 0 ? -d : d;
    KForm<Jet> vol(kJetVars, kJetVars);
    vol.comp[0] = orient * ae::sqrt(ad);
    return vol;
}

double vec_residual(const Vec<Jet>& got, const Vec<Jet>& want) {
    Vec<Jet> d(kJetVars);
    for (int a = 0; a < kJetVars; ++a) d[a] = got[a] - want[a];
    return rel(value_norm(d), value_norm(want));
}

// The algebraic identities of a compatible (phi, chi, theta, psi) package in
// the scale where sigma = 1, together with the Hodge-component relations for
// the volume orientation `orient`.  All identities are checked pointwise with
// relative residuals.
void check_slot_identities(Checker& C, const std::string& pre, const ChartGeometry& G,
                           const KForm<Jet>& phi, double orient, double tol) {
    const int n = kJetVars;
    ThreeFormSplit sp = L0_3form_split(G, phi);
    double nphi = 1.0 + value_norm(phi);
    double npsi = 1.0 + value_norm(sp.psi);
    double nth = 1.0 + value_norm(sp.theta);
    Vec<Jet> thup = raise_covector(G.ginv, sp.theta);

    Matrix<Jet> A = form_to_matrix(phi), Psi = form_to_matrix(sp.psi);
    Matrix<Jet> As = G.ginv * A, Ps = G.ginv * Psi;
    C.add(pre + "phi-square-zero", "phi^{a}{}_{c} phi^{c}{}_{b} = 0", tol,
          value_norm(As * As) / (nphi * nphi));
    C.add(pre + "psi-square-zero", "psi^{a}{}_{c} psi^{c}{}_{b} = 0", tol,
          value_norm(Ps * Ps) / (npsi * npsi));

    // phi with both indices raised, contracted into chi.
    Matrix<Jet> Aup = As * G.ginv;  // Aup(a,b) = phi^{ab} (antisymmetry keeps order safe)
    Vec<Jet> chicon(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) chicon[a] += Aup(b, c) * sp.chi.component({b, c, a});
    C.add(pre + "phi-chi-trace", "phi^{bc} chi_{bca} = 0", tol,
          value_norm(chicon) / (nphi * (1.0 + value_norm(sp.chi))));

    Vec<Jet> thphi(n), thpsi(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            thphi[a] += thup[b] * phi.component({b, a});
            thpsi[a] += thup[b] * sp.psi.component({b, a});
        }
    C.add(pre + "theta-phi", "theta^b phi_{ba} = 0", tol, value_norm(thphi) / (nth * nphi));
    C.add(pre + "theta-psi", "theta^b psi_{ba} = 0", tol, value_norm(thpsi) / (nth * npsi));

    Jet th2(0.0);
    for (int a = 0; a < n; ++a) th2 += thup[a] * sp.theta.component({a});
    C.add(pre + "theta-unit", "theta_b theta^b = -1", tol, std::abs(th2.value() + 1.0));

    C.add(pre + "psi-wedge-psi", "psi ^ psi = 0", tol,
          value_norm(wedge(sp.psi, sp.psi)) / (npsi * npsi));

    // Orientation: eps_g = 15 phi_[ab theta_c psi_de] = (1/2) phi ^ theta ^ psi
    // in the shuffle-wedge convention.
    KForm<Jet> vol = volume_form(G, orient);
    KForm<Jet> lhs5 = Jet(0.5) * wedge(wedge(phi, sp.theta), sp.psi);
    C.add(pre + "orientation", "eps_g = 15 phi_[ab theta_c psi_de]", tol,
          rel(value_norm(lhs5 - vol), value_norm(vol)));

    // Hodge components of the compatible package, against the same volume.
    KForm<Jet> sphi = hodge_star(G.g, vol, phi);
    C.add(pre + "star-phi", "*phi = 3 phi_[fg theta_h]", tol,
          rel(value_norm(sphi - wedge(phi, sp.theta)), value_norm(sphi)));
    KForm<Jet> schi = hodge_star(G.g, vol, sp.chi);
    KForm<Jet> chith(n, 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            Jet v(0.0);
            for (int i = 0; i < n; ++i) v += thup[i] * sp.chi.component({i, a, b});
            chith.set_coeff({1 + a, 1 + b}, v);
        }
    C.add(pre + "star-chi", "*chi = theta^i chi_{igh}", tol,
          rel(value_norm(schi - chith), 1.0 + value_norm(schi)));
    KForm<Jet> sth = hodge_star(G.g, vol, sp.theta);
    C.add(pre + "star-theta", "*theta = -3 phi_[ef psi_gh]", tol,
          rel(value_norm(sth + Jet(0.5) * wedge(phi, sp.psi)), 1.0 + value_norm(sth)));
    KForm<Jet> spsi = hodge_star(G.g, vol, sp.psi);
    C.add(pre + "star-psi", "*psi = 3 psi_[fg theta_h]", tol,
          rel(value_norm(spsi - wedge(sp.psi, sp.theta)), 1.0 + value_norm(spsi)));
}

// Lie-derivative relations of the canonical pair in the sigma = 1 scale; the
// signs are the ones forced by this library's I/J/K conventions and were
// calibrated once against the exact flat model.
void check_lie_relations(Checker& C, const std::string& pre, const ChartGeometry& G,
                         const Vec<Jet>& xi, const KForm<Jet>& phi, int eps, double tol) {
    IJKForms f = ijk_forms(G, Jet(1.0), phi);
    double nJ = 1.0 + value_norm(f.J);
    KForm<Jet> lphi = lie_derivative_weighted(G, xi, phi, 3.0);
    C.add(pre + "lie-phi", "L_xi phi = -3 J (weight 3)", tol,
          value_norm(lphi + Jet(3.0) * f.J) / nJ);
    KForm<Jet> lI = lie_derivative_weighted(G, xi, f.I, 3.0);
    C.add(pre + "lie-I", "L_xi I = 3 eps J (weight 3)", tol,
          value_norm(lI - Jet(3.0 * eps) * f.J) / nJ);
    KForm<Jet> lJ = lie_derivative_weighted(G, xi, f.J, 3.0);
    C.add(pre + "lie-J", "L_xi J = 3 I (weight 3)", tol,
          value_norm(lJ - Jet(3.0) * f.I) / (1.0 + value_norm(f.I)));
    KForm<Jet> lK = lie_derivative_weighted(G, xi, f.K, 3.0);
    C.add(pre + "lie-K", "L_xi K = 0 (weight 3)", tol,
          value_norm(lK) / (1.0 + value_norm(f.K)));
    Jet lsig = lie_derivative_weighted(G, xi, Jet(1.0), 1.0);
    C.add(pre + "lie-sigma", "L_xi sigma = 0 (weight 1)", tol, value_norm(lsig));
}

// ---------------------------------------------------------------------------
// Rolling example (Ricci-negative) and its para analogue (Ricci-positive).
//
// Coordinates (r, phi, s, psi, lam).  The displayed product-plus-circle
// metric g satisfies Ric = 4 g; the Einstein representative of the induced
// conformal class is -g, with Einstein constant -1/2.

Matrix<Jet> rolling_product_metric(const JetArgs& x) {
    const Jet &r = x[0], &ph = x[1], &s = x[2], &ps = x[3];
    Jet q1 = r * r + 1.0, q2 = s * s - 1.0;
    Jet ap = (2.0 / 3.0) / (q1 * q1);
    Jet am = (2.0 / 3.0) / (q2 * q2);
    std::array<Jet, 5> beta{};
    beta[0] = -2.0 * (-(2.0 / 3.0) * ph * r / (q1 * q1));
    beta[2] = -2.0 * ((2.0 / 3.0) * ps * s / (q2 * q2));
    beta[4] = Jet(1.0);
    Matrix<Jet> g(kJetVars, kJetVars);
    g(0, 0) = ap;
    g(1, 1) = ap * r * r;
    g(2, 2) = -am;
    g(3, 3) = -am * s * s;
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) g(a, b) += beta[a] * beta[b];
    return g;
}

std::pair<Vec<Jet>, Vec<Jet>> rolling_span(const JetArgs& x, double ups) {
    const Jet &r = x[0], &ph = x[1], &s = x[2], &ps = x[3], &lam = x[4];
    Jet q1 = r * r + 1.0, q2 = s * s - 1.0;
    // The phase carries +3 lam (the transcription we started from had -3 lam,
    // which breaks the conformal Killing equation for the associated 2-form;
    // with +3 lam it holds at machine precision).
    Jet gam = ((r * r - 1.0) / q1) * ph + ((s * s + 1.0) / q2) * ps + 3.0 * lam + ups;
    Jet cg = ae::cos(gam), sg = ae::sin(gam);
    Vec<Jet> u(kJetVars), v(kJetVars);
    u[0] = 3.0 * q1 * s;
    u[2] = 3.0 * q2 * s * cg;
    u[3] = 3.0 * q2 * sg;
    u[4] = 4.0 * s * (s * ps * cg / q2 - r * ph / q1);
    // The second generator needs factors r (d/ds term) and s (d/dlam term)
    // beyond the transcription we started from: without them the span is not
    // even isotropic, with them it is exactly null and the whole identity
    // suite downstream confirms the correction.
    v[1] = 3.0 * q1 * s;
    v[2] = 3.0 * r * q2 * s * sg;
    v[3] = -3.0 * r * q2 * cg;
    v[4] = (4.0 * s * s / q2) * r * ps * sg;
    return {u, v};
}

// Para analogue on two copies of the Lorentzian surface, coordinates
// (r1, phi1, r2, phi2, lam); the displayed metric satisfies Ric = -4 g and
// the Einstein representative of the induced class is -g with constant +1/2.
Matrix<Jet> rolling_para_metric(const JetArgs& x) {
    Matrix<Jet> g(kJetVars, kJetVars);
    std::array<Jet, 5> beta{};
    beta[4] = Jet(1.0);
    for (int k = 0; k < 2; ++k) {
        const Jet &r = x[2 * k], &ph = x[2 * k + 1];
        Jet q = r * r + 1.0;
        Jet a = (2.0 / 3.0) / (q * q);
        g(2 * k, 2 * k) = -a;
        g(2 * k + 1, 2 * k + 1) = a * r * r;
        // alpha has d(alpha) equal to the para-Kaehler form of h (+) h
        beta[2 * k] = -2.0 * ((2.0 / 3.0) * ph * r / (q * q));
    }
    Matrix<Jet> out(kJetVars, kJetVars);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) out(a, b) = g(a, b) + beta[a] * beta[b];
    return out;
}

// Frozen orientation/sign conventions (see file header).
constexpr double kRollingOrient = 1.0;
constexpr double kRollingFamilyDir = -1.0;
constexpr double kRollingSasakiEps = -1.0;
constexpr double kParaSasakiEps = 1.0;
constexpr double kDirichletXiSign = 1.0;
constexpr double kDirichletOrient = -1.0;
constexpr double kDirichletFamilyB = 1.0;

void verify_rolling_common(Checker& C, const GalleryExample& ex, const VerifyOptions& opt,
                           bool para) {
    const double csq = para ? -4.0 : 4.0;        // Ric = csq * g for the displayed g
    const double lam = para ? 0.5 : -0.5;        // Einstein constant of the class
    const int eps = para ? 1 : -1;
    const double sas_eps = para ? kParaSasakiEps : kRollingSasakiEps;

    Chart pos = ex.chart;  // displayed metric
    Chart neg = ex.chart;  // Einstein representative -g
    pos.metric = para ? rolling_para_metric : rolling_product_metric;
    neg.metric = [para](const JetArgs& x) {
        Matrix<Jet> g = para ? rolling_para_metric(x) : rolling_product_metric(x);
        for (Jet& e : g.data) e = -e;
        return g;
    };

    Vec<Jet> xi(kJetVars);
    xi[4] = Jet(1.0);

    for (const Point& pt : sorted_samples(ex, opt.points, opt.seed)) {
        ChartGeometry Gp = curvature_at(pos, pt);
        ChartGeometry Gn = curvature_at(neg, pt);

        Matrix<Jet> ric_res(kJetVars, kJetVars);
        for (int a = 0; a < kJetVars; ++a)
            for (int b = 0; b < kJetVars; ++b) ric_res(a, b) = Gp.Ric(a, b) - csq * Gp.g(a, b);
        C.add("ricci-einstein", "Ric(g) = " + std::to_string(int(csq)) + " g", opt.tol2,
              rel(value_norm(ric_res), value_norm(Gp.g)));

        EinsteinConstant ec = einstein_constant(Gn, Jet(1.0));
        C.add("einstein-constant", "lambda of the trivial scale on the Einstein representative",
              opt.tol2, std::max(std::abs(ec.via_tractor.value() - lam),
                                 std::abs(ec.via_formula.value() - lam)));
        C.add("theta0-scale", "Theta_0(1) = 0 on the Einstein representative", opt.tol_theta,
              rel(value_norm(theta0_standard(Gn, Jet(1.0))), value_norm(Gn.g)));

        KillingResiduals kr = conformal_killing_residual(Gn, xi);
        C.add("killing-xi", "the circle field is Killing", opt.tol_theta,
              rel(kr.killing, value_norm(Gn.g)));

        SasakiResiduals sr = sasaki_residuals(Gp, xi, sas_eps);
        C.add("sasaki", "Sasaki-type structure equations for (g, d/dlam)", opt.tol3,
              std::max({sr.unit, sr.killing, sr.curvature_identity}));
        C.add("sasaki-unit-sign",
              "d/dlam is unit for g and anti-unit for -g: the Sasaki-type pairing lives on g",
              opt.tol2,
              std::max(std::abs(metric_pair(Gp, xi, xi).value() - 1.0),
                       std::abs(metric_pair(Gn, xi, xi).value() + 1.0)));

        if (para) continue;  // no explicit distribution span in the para case

        for (double ups : opt.upsilon) {
            auto [u, v] = rolling_span(Gn.x, ups);
            double nuv = value_norm(u) + value_norm(v);
            C.require("growth-235", "each family member spans a (2,3,5) distribution",
                      growth_vector(u, v).is_235());
            double iso = std::max({std::abs(metric_pair(Gn, u, u).value()),
                                   std::abs(metric_pair(Gn, u, v).value()),
                                   std::abs(metric_pair(Gn, v, v).value())});
            C.add("isotropy", "the span is isotropic for the induced class", opt.tol2,
                  iso / (1.0 + nuv * nuv));

            ScaleFormData sfd = phi_from_distribution(Gn, u, v, xi, eps);
            const KForm<Jet>& phi = sfd.phi;
            double nphi = 1.0 + value_norm(phi);
            C.add("phi-annihilates-span", "phi-sharp vanishes on the distribution", opt.tol3,
                  std::max(value_norm(apply_form(Gn, phi, u)), value_norm(apply_form(Gn, phi, v))) /
                      (nphi * (1.0 + nuv)));
            KForm<Jet> Phi = L0_3form(Gn, phi);
            C.add("normality", "the splitting of phi is parallel", opt.tol3,
                  rel(normality_residual(Gn, Phi), value_norm(Phi)));

            ThreeFormSplit sp = L0_3form_split(Gn, phi);
            C.add("slot-consistency",
                  "splitting slots agree with the direct open-orbit construction", opt.tol3,
                  std::max(rel(value_norm(sp.psi - sfd.psi), value_norm(sfd.psi)),
                           rel(value_norm(sp.theta - sfd.theta), value_norm(sfd.theta))));

            check_slot_identities(C, "", Gn, phi, kRollingOrient, opt.tol3);
            check_lie_relations(C, "", Gn, xi, phi, eps, opt.tol3);

            C.add("xi-recovery", "iota_7 of the trivial scale returns the circle field",
                  opt.tol_theta, vec_residual(xi_iota7(Gn, Jet(1.0), phi), xi));
            KForm<Jet> xil = lower_vector(Gn.g, xi);
            C.add("pi7-left-inverse", "pi_7(xi-flat) = sigma", opt.tol3,
                  std::abs(pi7(Gn, phi, xil).value() - 1.0));

            // A non-trivial member of the circle family of compatible
            // 2-forms: the chart-level family formula at angle au must
            // reproduce, value for value, the 2-form constructed
            // independently from the rotated distribution span.
            double au = 0.6;
            KForm<Jet> phip = family_2form(Gn, Jet(1.0), phi, std::cos(au) - 1.0, std::sin(au));
            C.add("family-decomposable", "family members satisfy phi' ^ phi' = 0", opt.tol3,
                  value_norm(wedge(phip, phip)) / ((1.0 + value_norm(phip)) *
                                                   (1.0 + value_norm(phip))));
            C.require("family-nonvanishing", "family members do not vanish",
                      value_norm(phip) > 1e-6);
            auto [u2, v2] = rolling_span(Gn.x, ups + kRollingFamilyDir * au);
            KForm<Jet> phi2 = phi_from_distribution(Gn, u2, v2, xi, eps).phi;
            C.add("family-matches-rotated-span",
                  "the circle family member at angle u is the 2-form of the rotated span",
                  opt.tol3, rel(value_norm(phip - phi2), value_norm(phi2)));
        }
    }
}

// ---------------------------------------------------------------------------
// Dirichlet example (Ricci-positive with nonempty zero locus).
// Coordinates (x, y, p, a, r).

Jet dirichlet_w(const JetArgs& x) { return x[0] * x[2] - x[1]; }

struct DirichletFrame {
    Vec<Jet> EX{kJetVars}, EH{kJetVars}, EY{kJetVars};
};
DirichletFrame dirichlet_frame(const JetArgs& x) {
    Jet w = dirichlet_w(x);
    DirichletFrame f;
    f.EX[2] = -w * w;
    f.EX[3] = x[0] * w;
    f.EH[0] = x[0];
    f.EH[1] = x[1];
    f.EH[3] = Jet(-1.0);
    f.EY[0] = 1.0 / w;
    f.EY[1] = x[2] / w;
    return f;
}

Matrix<Jet> dirichlet_gprime(const JetArgs& x) {
    const int n = kJetVars;
    DirichletFrame f = dirichlet_frame(x);
    Matrix<Jet> M(n, n);
    std::array<const Vec<Jet>*, 3> cols{&f.EX, &f.EH, &f.EY};
    for (int j = 0; j < 3; ++j)
        for (int a = 0; a < n; ++a) M(a, j) = (*cols[j])[a];
    M(3, 3) = Jet(1.0);  // d/da
    M(4, 4) = Jet(1.0);  // d/dr
    Matrix<Jet> Mi = matrix_inverse(M);
    auto row = [&](int i) {
        Vec<Jet> r(n);
        for (int a = 0; a < n; ++a) r[a] = Mi(i, a);
        return r;
    };
    Vec<Jet> chi = row(0), eta = row(1), ups = row(2), alf = row(3);
    Matrix<Jet> gN(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            gN(a, b) = -0.5 * (chi[a] * ups[b] + ups[a] * chi[b]) - eta[a] * eta[b] +
                       0.5 * (eta[a] * alf[b] + alf[a] * eta[b]) - ups[a] * ups[b];
    Jet sigN = ae::exp(0.5 * x[3]) * ae::sqrt(dirichlet_w(x));
    Jet f2 = 1.0 / (sigN * sigN);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) gN(a, b) = f2 * gN(a, b);
    gN(4, 4) = Jet(-1.0);
    return gN;
}

Matrix<Jet> dirichlet_gsr(const JetArgs& x) {
    Matrix<Jet> g = dirichlet_gprime(x);
    Jet f = 1.0 / (x[4] * x[4]);
    for (Jet& e : g.data) e = f * e;
    return g;
}

std::map<std::string, VectorField> dirichlet_symmetry_fields() {
    std::map<std::string, VectorField> m;
    m["X"] = [](const JetArgs& x) {
        Vec<Jet> v(kJetVars);
        v[0] = x[1];
        v[2] = -x[2] * x[2];
        v[3] = x[2];
        return v;
    };
    m["H"] = [](const JetArgs& x) {
        Vec<Jet> v(kJetVars);
        v[0] = -x[0];
        v[1] = x[1];
        v[2] = 2.0 * x[2];
        v[3] = Jet(-1.0);
        return v;
    };
    m["Y"] = [](const JetArgs& x) {
        Vec<Jet> v(kJetVars);
        v[1] = x[0];
        v[2] = Jet(1.0);
        return v;
    };
    m["Z"] = [](const JetArgs& x) {
        Vec<Jet> v(kJetVars);
        Jet e = ae::exp(-x[3]);
        v[2] = e * dirichlet_w(x);
        v[3] = -e * x[0];
        return v;
    };
    m["A"] = [](const JetArgs& x) {
        Vec<Jet> v(kJetVars);
        v[3] = Jet(-2.0);
        v[4] = x[4];
        return v;
    };
    m["dr"] = [](const JetArgs&) {
        Vec<Jet> v(kJetVars);
        v[4] = Jet(1.0);
        return v;
    };
    return m;
}

// Spanning pair of the family member with parameter t; fam = -1 picks the
// branch through the base distribution at t = 0, fam = +1 the antipodal one.
// v2 has a 1/r pole; v2s = v2 - v1/(2r) spans the same plane together with
// v1 and extends smoothly across r = 0.
struct DirichletGens {
    Vec<Jet> v1{kJetVars}, v2{kJetVars}, v2s{kJetVars};
};
DirichletGens dirichlet_gens(const JetArgs& x, double t, int fam, bool with_pole) {
    DirichletFrame fr = dirichlet_frame(x);
    Jet w = dirichlet_w(x);
    const Jet &a = x[3], &r = x[4];
    double f = static_cast<double>(fam);
    Jet e1 = ae::exp(-a + f * t);       // e^{-a -/+ t}
    Jet e2 = ae::exp(2.0 * a - f * t);  // e^{2a +/- t}
    Jet e3 = ae::exp(Jet(f * t));       // e^{-/+ t}
    // The transcription we started from carried the d/dr term of the second
    // generator with the same sign as the frame terms; the kernel of the
    // verified-normal 2-form shows that d/dr enters with the opposite
    // relative sign.  (Equivalently: the whole generator below is the
    // negative of that transcription with its d/dr term kept.)
    DirichletGens g;
    for (int i = 0; i < kJetVars; ++i) {
        g.v1[i] = (-f) * (r * e1 / w) * fr.EX[i];
        g.v2s[i] = (-f) * (2.0 * e2 * w * w + 0.5 * e3 * r * r + e1 / (2.0 * w)) * fr.EX[i] -
                   ae::exp(a) * r * w * fr.EH[i] + f * 2.0 * w * w * e2 * fr.EY[i];
    }
    g.v1[3] += Jet(2.0);
    g.v2s[4] += Jet(1.0);
    if (with_pole) {
        for (int i = 0; i < kJetVars; ++i)
            g.v2[i] = (-f) * (2.0 * e2 * w * w + 0.5 * e3 * r * r) * fr.EX[i] -
                      ae::exp(a) * r * w * fr.EH[i] + f * 2.0 * w * w * e2 * fr.EY[i];
        g.v2[3] += -1.0 / r;
        g.v2[4] += Jet(1.0);
    }
    return g;
}

// Euclidean projection residual of w off span(u, v) at the jet base point.
double span_residual(const Vec<Jet>& u, const Vec<Jet>& v, const Vec<Jet>& w) {
    auto dot = [](const Vec<Jet>& a, const Vec<Jet>& b) {
        double s = 0;
        for (int i = 0; i < kJetVars; ++i) s += a[i].value() * b[i].value();
        return s;
    };
    std::array<double, kJetVars> e1{}, e2{}, wv{};
    double nu = std::sqrt(dot(u, u));
    for (int i = 0; i < kJetVars; ++i) e1[i] = u[i].value() / nu;
    double vp = 0;
    for (int i = 0; i < kJetVars; ++i) vp += v[i].value() * e1[i];
    double n2 = 0;
    for (int i = 0; i < kJetVars; ++i) {
        e2[i] = v[i].value() - vp * e1[i];
        n2 += e2[i] * e2[i];
    }
    n2 = std::sqrt(n2);
    for (int i = 0; i < kJetVars; ++i) e2[i] /= n2;
    double w1 = 0, w2 = 0, nw = 0;
    for (int i = 0; i < kJetVars; ++i) {
        wv[i] = w[i].value();
        nw += wv[i] * wv[i];
    }
    nw = std::sqrt(nw);
    for (int i = 0; i < kJetVars; ++i) {
        w1 += wv[i] * e1[i];
        w2 += wv[i] * e2[i];
    }
    double res = 0;
    for (int i = 0; i < kJetVars; ++i) {
        double d = wv[i] - w1 * e1[i] - w2 * e2[i];
        res += d * d;
    }
    return std::sqrt(res) / (nw > 0 ? nw : 1.0);
}

void verify_dirichlet(Checker& C, const GalleryExample& ex, const VerifyOptions& opt) {
    Chart cprime = ex.chart;
    Chart csr = ex.chart;
    csr.metric = dirichlet_gsr;

    auto sym = dirichlet_symmetry_fields();
    const double s = kDirichletXiSign;

    for (const Point& pt : sorted_samples(ex, opt.points, opt.seed)) {
        ChartGeometry G = curvature_at(cprime, pt);
        ChartGeometry Gs = curvature_at(csr, pt);
        Jet r = G.x[4];

        C.add("ricci-flat", "Ric(g') = 0", opt.tol2, rel(value_norm(G.Ric), value_norm(G.g)));
        Matrix<Jet> ric_res(kJetVars, kJetVars);
        for (int a = 0; a < kJetVars; ++a)
            for (int b = 0; b < kJetVars; ++b) ric_res(a, b) = Gs.Ric(a, b) - 4.0 * Gs.g(a, b);
        C.add("ricci-poincare", "Ric(r^{-2} g') = 4 r^{-2} g' on the open orbits", opt.tol2,
              rel(value_norm(ric_res), value_norm(Gs.g)));

        C.add("theta0-scale-1", "Theta_0(1) = 0 in the scale of g'", opt.tol_theta,
              rel(value_norm(theta0_standard(G, Jet(1.0))), value_norm(G.g)));
        C.add("theta0-scale-r", "Theta_0(r) = 0 in the scale of g'", opt.tol_theta,
              rel(value_norm(theta0_standard(G, r)), value_norm(G.g)));
        EinsteinConstant e1 = einstein_constant(G, Jet(1.0));
        EinsteinConstant e2 = einstein_constant(G, r);
        C.add("einstein-constant-1", "lambda(1) = 0 (Ricci-flat scale)", opt.tol2,
              std::max(std::abs(e1.via_tractor.value()), std::abs(e1.via_formula.value())));
        C.add("einstein-constant-r", "lambda(r) = 1/2 (Ricci-positive scale)", opt.tol2,
              std::max(std::abs(e2.via_tractor.value() - 0.5),
                       std::abs(e2.via_formula.value() - 0.5)));

        for (const auto& [name, field] : sym) {
            Vec<Jet> v = field(G.x);
            KillingResiduals kr = conformal_killing_residual(G, v);
            C.add("killing-" + name, "symmetry field '" + name + "' is conformal Killing for g'",
                  opt.tol_theta, rel(kr.conformal_killing, value_norm(v) + value_norm(G.g)));
        }

        // Base distribution (t = 0 on the branch through it) and its 2-form
        // in the scale of the Einstein metric r^{-2} g'.
        DirichletGens g0 = dirichlet_gens(Gs.x, 0.0, -1, true);
        Vec<Jet> xi(kJetVars);
        {
            Vec<Jet> A = sym["A"](Gs.x);
            for (int i = 0; i < kJetVars; ++i) xi[i] = s * A[i];
        }
        C.require("growth-235", "the family spans are (2,3,5)",
                  growth_vector(g0.v1, g0.v2s).is_235());
        double nuv = value_norm(g0.v1) + value_norm(g0.v2);
        C.add("isotropy", "the span is isotropic for the induced class", opt.tol2,
              std::max({std::abs(metric_pair(G, g0.v1, g0.v1).value()),
                        std::abs(metric_pair(G, g0.v1, g0.v2).value()),
                        std::abs(metric_pair(G, g0.v2, g0.v2).value())}) /
                  (1.0 + nuv * nuv));

        ScaleFormData sfd = phi_from_distribution(Gs, g0.v1, g0.v2, xi, 1);
        KForm<Jet> phisr = sfd.phi;
        C.add("phi-annihilates-span", "phi-sharp vanishes on the distribution", opt.tol3,
              std::max(value_norm(apply_form(Gs, phisr, g0.v1)),
                       value_norm(apply_form(Gs, phisr, g0.v2))) /
                  ((1.0 + value_norm(phisr)) * (1.0 + nuv)));

        check_slot_identities(C, "", Gs, phisr, kDirichletOrient, opt.tol3);
        check_lie_relations(C, "", Gs, xi, phisr, 1, opt.tol3);

        // Transfer to the trivialization by g' (weight 3) and test the two
        // advertised conformal Killing fields of the pair of scales.
        Jet r3 = r * r * r;
        KForm<Jet> phig(kJetVars, 2);
        for (size_t i = 0; i < phig.comp.size(); ++i) phig.comp[i] = r3 * phisr.comp[i];
        KForm<Jet> Phig = L0_3form(G, phig);
        C.add("normality", "the splitting of phi is parallel in the scale of g'", opt.tol3,
              rel(normality_residual(G, Phig), value_norm(Phig)));
        Vec<Jet> wantA = sym["A"](G.x), wantZ = sym["Z"](G.x);
        // The boost field enters with the opposite relative sign to d/dr
        // (the transcription we started from shows them with equal signs,
        // which fails by twice the boost field at every sample point).
        for (int i = 0; i < kJetVars; ++i) wantZ[i] = -wantZ[i];
        wantZ[4] += Jet(1.0);  // -Z + d/dr
        for (int i = 0; i < kJetVars; ++i) {
            wantA[i] = s * wantA[i];
            wantZ[i] = s * wantZ[i];
        }
        C.add("iota7-r", "iota_7(r) is the scaling symmetry field", opt.tol_theta,
              vec_residual(xi_iota7(G, r, phig), wantA));
        C.add("iota7-1", "iota_7(1) is -Z + d/dr", opt.tol_theta,
              vec_residual(xi_iota7(G, Jet(1.0), phig), wantZ));

        // Family member at parameter t: the advertised span of the branch
        // through the base distribution lies in the kernel of the family
        // 2-form, while the antipodal branch does not.
        double t = opt.t;
        KForm<Jet> phit = family_2form(Gs, Jet(1.0), phisr, 1.0 - std::cosh(t),
                                       kDirichletFamilyB * std::sinh(t));
        DirichletGens gt = dirichlet_gens(Gs.x, t, -1, true);
        DirichletGens ga = dirichlet_gens(Gs.x, t, +1, true);
        double nphit = 1.0 + value_norm(phit);
        auto ann = [&](const Vec<Jet>& v) {
            return value_norm(apply_form(Gs, phit, v)) / (nphit * (1.0 + value_norm(v)));
        };
        C.add("family-span", "the family member at parameter t annihilates the advertised span",
              opt.tol3, std::max(ann(gt.v1), ann(gt.v2)));
        C.require("family-branch-separation",
                  "the family member at parameter t does not annihilate the antipodal branch",
                  std::min(ann(ga.v1), ann(ga.v2)) > 1e-3);
        {
            Matrix<double> m(kJetVars, kJetVars);
            for (int a = 0; a < kJetVars; ++a)
                for (int b = 0; b < kJetVars; ++b) m(a, b) = phit.component({a, b}).value();
            C.require("family-kernel-rank",
                      "the family member has the rank of a decomposable 2-form",
                      matrix_rank(m, 1e-8 * nphit) == 2);
        }
    }

    // Orbit sweep and smooth extension across the zero locus at a fixed base
    // point; r = -1/2, 0, +1/2.
    const Point base{1.0, 0.3, 0.8, 0.2, 0.0};
    for (double rv : {-0.5, 0.0, 0.5}) {
        Point pt = base;
        pt[4] = rv;
        ChartGeometry G = curvature_at(cprime, pt);
        if (rv != 0.0) {
            ChartGeometry Gs = curvature_at(csr, pt);
            DirichletGens g0 = dirichlet_gens(Gs.x, 0.0, -1, true);
            Vec<Jet> xi(kJetVars);
            Vec<Jet> A = dirichlet_symmetry_fields()["A"](Gs.x);
            for (int i = 0; i < kJetVars; ++i) xi[i] = s * A[i];
            KForm<Jet> phisr = phi_from_distribution(Gs, g0.v1, g0.v2, xi, 1).phi;
            Jet r3 = G.x[4] * G.x[4] * G.x[4];
            KForm<Jet> phig(kJetVars, 2);
            for (size_t i = 0; i < phig.comp.size(); ++i) phig.comp[i] = r3 * phisr.comp[i];
            PointClassification pc = classify_point(G, G.x[4], phig);
            C.require("classify-sweep", "sign of r separates the open orbits from the zero locus",
                      pc.label == (rv > 0 ? OrbitLabel::M5p : OrbitLabel::M5m));
        } else {
            // On the zero locus the distinguished field iota_7(r), verified
            // above to equal the scaling symmetry field on the open orbits,
            // extends smoothly and is nonzero, so the label is the
            // hypersurface orbit.
            Vec<Jet> A = dirichlet_symmetry_fields()["A"](G.x);
            C.require("classify-sweep", "sign of r separates the open orbits from the zero locus",
                      std::abs(G.x[4].value()) < 1e-12 && value_norm(A) > 1e-8);
        }
        // Smooth extension of both family branches across r = 0: the wedge of
        // the recombined generators (v1, v2 - v1/(2r)) stays nondegenerate.
        for (int fam : {-1, 1}) {
            for (double t : {0.0, opt.t}) {
                DirichletGens g = dirichlet_gens(G.x, t, fam, false);
                double wmax = 0;
                for (int a = 0; a < kJetVars; ++a)
                    for (int b = a + 1; b < kJetVars; ++b)
                        wmax = std::max(wmax, std::abs((g.v1[a] * g.v2s[b] -
                                                        g.v1[b] * g.v2s[a]).value()));
                double scale = value_norm(g.v1) * value_norm(g.v2s);
                C.require("wedge-across-zero-locus",
                          "both family branches extend smoothly across the zero locus",
                          wmax > 1e-6 * (scale > 0 ? scale : 1.0));
                if (rv == 0.0)
                    C.require("growth-235-zero-locus",
                              "the extended span is (2,3,5) on the zero locus",
                              growth_vector(g.v1, g.v2s).is_235());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Submaximally symmetric distributions, coordinates (x, y, p, q, z).

MetricField submaximal_metric(double I) {
    return [I](const JetArgs& c) {
        const Jet &y = c[1], &p = c[2], &q = c[3];
        Matrix<Jet> g(kJetVars, kJetVars);
        g(0, 0) = -1.5 * (I * I + 1.0) * y * y + 2.0 * I * p * p - 0.5 * q * q;
        g(0, 1) = g(1, 0) = -2.0 * I * p;
        g(0, 2) = g(2, 0) = 0.5 * q;
        g(0, 3) = g(3, 0) = -1.5 * p;
        g(0, 4) = g(4, 0) = Jet(-1.5);
        g(1, 1) = Jet(-3.0 * I);
        g(1, 3) = g(3, 1) = Jet(1.5);
        g(2, 2) = Jet(-2.0);
        return g;
    };
}

std::pair<Vec<Jet>, Vec<Jet>> submaximal_span(const JetArgs& c, double I) {
    Vec<Jet> u(kJetVars), v(kJetVars);
    u[3] = Jet(1.0);
    v[0] = Jet(1.0);
    v[1] = c[2];
    v[2] = c[3];
    v[4] = -0.5 * (c[3] * c[3] + (10.0 / 3.0) * I * c[2] * c[2] +
                   (1.0 + I * I) * c[1] * c[1]);
    return {u, v};
}

// Basis of solutions of sigma'' = (I/3) sigma, pulled back along x.
std::array<ScalarField, 2> submaximal_scales(double I) {
    if (I == 0.0)
        return {ScalarField([](const JetArgs&) { return Jet(1.0); }),
                ScalarField([](const JetArgs& c) { return c[0]; })};
    double k = std::sqrt(std::abs(I) / 3.0);
    if (I > 0.0)
        return {ScalarField([k](const JetArgs& c) { return ae::cosh(k * c[0]); }),
                ScalarField([k](const JetArgs& c) { return ae::sinh(k * c[0]); })};
    return {ScalarField([k](const JetArgs& c) { return ae::cos(k * c[0]); }),
            ScalarField([k](const JetArgs& c) { return ae::sin(k * c[0]); })};
}

void verify_submaximal(Checker& C, const GalleryExample& ex, const VerifyOptions& opt) {
    for (double I : opt.submaximal_I) {
        Chart c = ex.chart;
        c.metric = submaximal_metric(I);
        Chart conf = c;  // conformally rescaled chart, Omega = 1 + 0.1 sin(x)
        conf.metric = [I](const JetArgs& a) {
            Matrix<Jet> g = submaximal_metric(I)(a);
            Jet om = 1.0 + 0.1 * ae::sin(a[0]);
            Jet f = om * om;
            for (Jet& e : g.data) e = f * e;
            return g;
        };
        auto scales = submaximal_scales(I);

        for (const Point& pt : sorted_samples(ex, opt.points, opt.seed)) {
            ChartGeometry G = curvature_at(c, pt);
            ChartGeometry Gc = curvature_at(conf, pt);
            Jet om = 1.0 + 0.1 * ae::sin(G.x[0]);

            std::array<Jet, 3> sigs{scales[0](G.x), scales[1](G.x),
                                    scales[0](G.x) + 0.5 * scales[1](G.x)};
            for (const Jet& sig : sigs) {
                C.add("theta0-scale", "the advertised solution family solves Theta_0 = 0",
                      opt.tol_theta, rel(value_norm(theta0_standard(G, sig)), value_norm(G.g)));
                EinsteinConstant ec = einstein_constant(G, sig);
                C.add("einstein-constant", "all almost Einstein scales are Ricci-flat",
                      opt.tol2, std::max(std::abs(ec.via_tractor.value()),
                                         std::abs(ec.via_formula.value())));
                // Conformal invariance: rescale the representative and the
                // trivialized scale together.
                EinsteinConstant ecc = einstein_constant(Gc, om * sig);
                C.add("conformal-theta0", "Theta_0 = 0 is conformally invariant", opt.tol_theta,
                      rel(value_norm(theta0_standard(Gc, om * sig)), value_norm(Gc.g)));
                C.add("conformal-lambda", "the Einstein constant is conformally invariant",
                      opt.tol2, std::max(std::abs(ecc.via_tractor.value()),
                                         std::abs(ecc.via_formula.value())));
            }

            auto [u, v] = submaximal_span(G.x, I);
            C.require("growth-235", "the submaximal span is a (2,3,5) distribution",
                      growth_vector(u, v).is_235());
            C.add("isotropy", "the span is isotropic for the induced class", opt.tol2,
                  std::max({std::abs(metric_pair(G, u, u).value()),
                            std::abs(metric_pair(G, u, v).value()),
                            std::abs(metric_pair(G, v, v).value())}) /
                      (1.0 + std::pow(value_norm(u) + value_norm(v), 2)));

            if (opt.inject_bad_scale) {
                Jet bad = G.x[0] * G.x[0];
                C.add("theta0-injected-nonsolution",
                      "expected-fail fixture: sigma = x^2 is not an almost Einstein scale",
                      opt.tol_theta, rel(value_norm(theta0_standard(G, bad)), value_norm(G.g)));
            }
        }

        // Direct curvature check in one rescaled Einstein scale (positive on
        // the sampling box so the rescaled metric is defined there).
        Chart eins = c;
        eins.metric = [I](const JetArgs& a) {
            Matrix<Jet> g = submaximal_metric(I)(a);
            auto sc = submaximal_scales(I);
            Jet sig = sc[0](a);
            Jet f = 1.0 / (sig * sig);
            for (Jet& e : g.data) e = f * e;
            return g;
        };
        for (const Point& pt : sorted_samples(ex, std::min(opt.points, 5), opt.seed + 1)) {
            ChartGeometry Ge = curvature_at(eins, pt);
            C.add("ricci-flat-rescaled", "the rescaled representatives are Ricci-flat",
                  opt.tol2, rel(value_norm(Ge.Ric), value_norm(Ge.g)));
        }
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Public entry points.

GalleryExample load_example(const std::string& name) {
    GalleryExample ex;
    ex.name = name;
    if (name == "rolling") {
        ex.eps = -1;
        ex.chart.name = "rolling";
        ex.chart.coords = {"r", "phi", "s", "psi", "lam"};
        ex.chart.metric = [](const JetArgs& x) {
            Matrix<Jet> g = rolling_product_metric(x);
            for (Jet& e : g.data) e = -e;
            return g;
        };
        ex.chart.domain = [](const Point& p) { return p[0] > 0.05 && p[2] > 1.05; };
        ex.sample = [](std::mt19937& rng) {
            return Point{uni(rng, 0.1, 3.0), uni(rng, -1.5, 1.5), uni(rng, 1.1, 3.0),
                         uni(rng, -1.5, 1.5), uni(rng, -1.0, 1.0)};
        };
        ex.vectors["xi"] = [](const JetArgs&) {
            Vec<Jet> v(kJetVars);
            v[4] = Jet(1.0);
            return v;
        };
        ex.vectors["D0_1"] = [](const JetArgs& x) { return rolling_span(x, 0.0).first; };
        ex.vectors["D0_2"] = [](const JetArgs& x) { return rolling_span(x, 0.0).second; };
    } else if (name == "rolling-para") {
        ex.eps = 1;
        ex.chart.name = "rolling-para";
        ex.chart.coords = {"r1", "phi1", "r2", "phi2", "lam"};
        ex.chart.metric = [](const JetArgs& x) {
            Matrix<Jet> g = rolling_para_metric(x);
            for (Jet& e : g.data) e = -e;
            return g;
        };
        ex.chart.domain = [](const Point& p) { return p[0] > 0.05 && p[2] > 0.05; };
        ex.sample = [](std::mt19937& rng) {
            return Point{uni(rng, 0.1, 3.0), uni(rng, -1.5, 1.5), uni(rng, 0.1, 3.0),
                         uni(rng, -1.5, 1.5), uni(rng, -1.0, 1.0)};
        };
        ex.vectors["xi"] = [](const JetArgs&) {
            Vec<Jet> v(kJetVars);
            v[4] = Jet(1.0);
            return v;
        };
    } else if (name == "dirichlet") {
        ex.eps = 1;
        ex.chart.name = "dirichlet";
        ex.chart.coords = {"x", "y", "p", "a", "r"};
        ex.chart.metric = dirichlet_gprime;
        ex.chart.domain = [](const Point& p) {
            return p[0] * p[2] - p[1] > 0.1 && std::abs(p[4]) > 0.2;
        };
        ex.sample = [](std::mt19937& rng) {
            double x = uni(rng, 0.5, 1.5), p = uni(rng, 0.5, 1.5);
            double y = x * p - uni(rng, 0.2, 1.0);
            double r = uni(rng, 0.3, 1.5) * (uni(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
            return Point{x, y, p, uni(rng, -1.0, 1.0), r};
        };
        ex.scalars["sigma_r"] = [](const JetArgs& x) { return x[4]; };
        ex.scalars["sigma_1"] = [](const JetArgs&) { return Jet(1.0); };
        for (auto& [k, f] : dirichlet_symmetry_fields()) ex.vectors[k] = f;
        ex.vectors["D0_1"] = [](const JetArgs& x) {
            return dirichlet_gens(x, 0.0, -1, false).v1;
        };
        ex.vectors["D0_2"] = [](const JetArgs& x) {
            return dirichlet_gens(x, 0.0, -1, false).v2s;
        };
    } else if (name == "submaximal") {
        ex.eps = 0;
        ex.chart.name = "submaximal";
        ex.chart.coords = {"x", "y", "p", "q", "z"};
        ex.chart.metric = submaximal_metric(1.0);
        ex.sample = [](std::mt19937& rng) {
            Point p;
            for (double& c : p) c = uni(rng, -1.0, 1.0);
            return p;
        };
        ex.vectors["D_1"] = [](const JetArgs& c) { return submaximal_span(c, 1.0).first; };
        ex.vectors["D_2"] = [](const JetArgs& c) { return submaximal_span(c, 1.0).second; };
    } else {
        throw std::invalid_argument("load_example: unknown example '" + name +
                                    "' (expected rolling, rolling-para, dirichlet, submaximal)");
    }
    return ex;
}

nlohmann::ordered_json VerificationReport::to_json() const {
    nlohmann::ordered_json j;
    j["example"] = example;
    j["seed"] = seed;
    j["points"] = points;
    j["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& c : checks) {
        nlohmann::ordered_json e;
        e["id"] = c.id;
        e["paper_ref"] = c.ref;
        e["max_residual"] = c.max_residual;
        e["tolerance"] = c.tolerance;
        e["pass"] = c.pass;
        j["checks"].push_back(e);
    }
    j["overall"] = overall;
    j["notes"] = nlohmann::ordered_json::array(
        {"holonomy statements quoted alongside the examples are not verified by this tool"});
    return j;
}

VerificationReport verify_example(const std::string& name, const VerifyOptions& opt) {
    GalleryExample ex = load_example(name);
    Checker C;
    if (name == "rolling") {
        verify_rolling_common(C, ex, opt, false);
    } else if (name == "rolling-para") {
        verify_rolling_common(C, ex, opt, true);
    } else if (name == "dirichlet") {
        verify_dirichlet(C, ex, opt);
    } else if (name == "submaximal") {
        verify_submaximal(C, ex, opt);
    }
    VerificationReport r;
    r.example = name;
    r.seed = opt.seed;
    r.points = opt.points;
    r.checks = C.list;
    r.overall = C.overall();
    return r;
}

}  // namespace ae
