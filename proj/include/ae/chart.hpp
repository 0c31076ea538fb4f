// Chart-level calculus for almost Einstein (2,3,5) geometry in dimension 5.
//
// Everything is evaluated at a single chart point through jet arithmetic: a
// metric is a function from seeded coordinate jets to a 5x5 Matrix<Jet>, and
// all downstream quantities (Christoffel symbols, curvature, Schouten tensor,
// splitting operators, tractor covariant derivatives, the I/J/K two-forms of
// a scale/compatible-two-form pair, Lie derivatives, orbit classification)
// come out as jets at that point, so derivative-level identities can be
// checked without finite differencing.
//
// Conventions:
//   * chart indices a,b,... run 0..4; tractor fiber indices run 0..6 with
//     slot 0 the rho-component, slots 1..5 the tangent components (chart
//     index a at fiber slot 1+a) and slot 6 the sigma-component;
//   * covariant derivatives append their index LAST: D phi.at({a,b,c}) is
//     phi_{ab;c}, and DD.at({a,b,c,d}) is the second derivative taken first
//     along c, then along d;
//   * R^a_{bcd} = dGamma^a_{db}/dx^c - dGamma^a_{cb}/dx^d + Gamma Gamma,
//     Ric_{bd} = R^a_{bad}, P = (Ric - scal/8 g)/3 in dimension 5.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ae/expr.hpp"
#include "ae/forms.hpp"
#include "ae/jet.hpp"
#include "ae/stabilizer.hpp"

namespace ae {

using Point = std::array<double, kJetVars>;

inline JetArgs seed_point(const Point& x, int ord = kJetMaxOrder) {
    JetArgs j;
    for (int i = 0; i < kJetVars; ++i) j[i] = Jet::variable(i, x[i], ord);
    return j;
}

using MetricField = std::function<Matrix<Jet>(const JetArgs&)>;
using ScalarField = std::function<Jet(const JetArgs&)>;
using VectorField = std::function<Vec<Jet>(const JetArgs&)>;

struct Chart {
    std::string name;
    std::array<std::string, kJetVars> coords{{"x1", "x2", "x3", "x4", "x5"}};
    MetricField metric;
    std::function<bool(const Point&)> domain = [](const Point&) { return true; };
};

// Builds a metric field from a 5x5 array of coordinate expressions.
inline MetricField metric_from_expressions(
    const std::array<std::array<std::string, kJetVars>, kJetVars>& entries,
    const std::array<std::string, kJetVars>& coords) {
    std::array<std::array<JetExprFn, kJetVars>, kJetVars> fns;
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) fns[a][b] = parse_expression(entries[a][b], coords);
    return [fns](const JetArgs& x) {
        Matrix<Jet> g(kJetVars, kJetVars);
        for (int a = 0; a < kJetVars; ++a)
            for (int b = 0; b < kJetVars; ++b) g(a, b) = fns[a][b](x);
        return g;
    };
}

// ---------------------------------------------------------------------------
// Pseudo-Riemannian data of a chart at one point.

struct ChartGeometry {
    JetArgs x;          // seeded coordinates
    Matrix<Jet> g;      // metric
    Matrix<Jet> ginv;   // inverse metric
    Tensor<Jet> Gamma;  // Gamma.at({a,b,c}) = Gamma^a_{bc}
    Tensor<Jet> Riem;   // Riem.at({a,b,c,d}) = R^a_{bcd}
    Matrix<Jet> Ric;    // Ricci tensor
    Jet scal;           // scalar curvature
    Matrix<Jet> P;      // Schouten tensor
    Jet Ptrace;         // P^a_a
};

inline Jet matrix_det(Matrix<Jet> m) {
    int n = m.rows;
    Jet det(1.0);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        double best = 0;
        for (int r = col; r < n; ++r) {
            double v = std::abs(m(r, col).value());
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (piv < 0 || best == 0.0) return Jet(0.0);
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det = det * m(col, col);
        for (int r = col + 1; r < n; ++r) {
            if (m(r, col).is_zero()) continue;
            Jet f = m(r, col) / m(col, col);
            for (int j = col; j < n; ++j) m(r, j) = m(r, j) - f * m(col, j);
        }
    }
    return det;
}

inline ChartGeometry curvature_at(const Chart& c, const Point& pt) {
    const int n = kJetVars;
    ChartGeometry G;
    G.x = seed_point(pt);
    G.g = c.metric(G.x);
    G.ginv = matrix_inverse(G.g);
    G.Gamma = Tensor<Jet>(n, 3);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int cc = b; cc < n; ++cc) {
                Jet s(0.0);
                for (int d = 0; d < n; ++d)
                    s += G.ginv(a, d) *
                         (G.g(d, b).deriv(cc) + G.g(d, cc).deriv(b) - G.g(b, cc).deriv(d));
                s = 0.5 * s;
                G.Gamma.at({a, b, cc}) = s;
                G.Gamma.at({a, cc, b}) = s;
            }
    G.Riem = Tensor<Jet>(n, 4);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc)
                for (int d = 0; d < n; ++d) {
                    Jet r = G.Gamma.at({a, d, b}).deriv(cc) - G.Gamma.at({a, cc, b}).deriv(d);
                    for (int e = 0; e < n; ++e)
                        r += G.Gamma.at({a, cc, e}) * G.Gamma.at({e, d, b}) -
                             G.Gamma.at({a, d, e}) * G.Gamma.at({e, cc, b});
                    G.Riem.at({a, b, cc, d}) = r;
                }
    G.Ric = Matrix<Jet>(n, n);
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
            Jet r(0.0);
            for (int a = 0; a < n; ++a) r += G.Riem.at({a, b, a, d});
            G.Ric(b, d) = r;
        }
    G.scal = Jet(0.0);
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) G.scal += G.ginv(b, d) * G.Ric(b, d);
    G.P = Matrix<Jet>(n, n);
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d)
            G.P(b, d) = (1.0 / 3.0) * (G.Ric(b, d) - (1.0 / 8.0) * G.scal * G.g(b, d));
    G.Ptrace = Jet(0.0);
    for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) G.Ptrace += G.ginv(b, d) * G.P(b, d);
    return G;
}

// ---------------------------------------------------------------------------
// Covariant derivatives of chart tensors.  A JT is a dense tensor with a
// variance flag per slot (true = contravariant).

struct JT {
    Tensor<Jet> t;
    std::vector<bool> up;
};

inline JT jt_scalar(const Jet& s) {
    JT r{Tensor<Jet>(kJetVars, 0), {}};
    r.t.data[0] = s;
    return r;
}
inline JT jt_vector(const Vec<Jet>& v) {
    JT r{Tensor<Jet>(kJetVars, 1), {true}};
    for (int a = 0; a < kJetVars; ++a) r.t.at({a}) = v[a];
    return r;
}
inline JT jt_covector(const KForm<Jet>& w) {
    JT r{Tensor<Jet>(kJetVars, 1), {false}};
    for (int a = 0; a < kJetVars; ++a) r.t.at({a}) = w.component({a});
    return r;
}
inline JT jt_form(const KForm<Jet>& w) {
    JT r{tensor_from_form(w), std::vector<bool>(w.degree, false)};
    return r;
}
inline JT jt_matrix_low(const Matrix<Jet>& m) {
    JT r{Tensor<Jet>(kJetVars, 2), {false, false}};
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) r.t.at({a, b}) = m(a, b);
    return r;
}

// Levi-Civita covariant derivative; the new (covariant) index is appended
// last.
inline JT cov_deriv(const ChartGeometry& G, const JT& T) {
    const int n = kJetVars;
    int rank = T.t.rank;
    JT r{Tensor<Jet>(n, rank + 1), T.up};
    r.up.push_back(false);
    r.t.for_each([&](const std::vector<int>& full, const Jet&) {
        std::vector<int> I(full.begin(), full.end() - 1);
        int b = full.back();
        Jet v = T.t.at(I).deriv(b);
        for (int s = 0; s < rank; ++s) {
            std::vector<int> J = I;
            for (int e = 0; e < n; ++e) {
                J[s] = e;
                if (T.up[s])
                    v += G.Gamma.at({I[s], b, e}) * T.t.at(J);
                else
                    v -= G.Gamma.at({e, b, I[s]}) * T.t.at(J);
            }
        }
        r.t.at(full) = v;
    });
    return r;
}

inline JT raise_slot(const ChartGeometry& G, const JT& T, int slot) {
    JT r = T;
    r.up[slot] = true;
    r.t.for_each([&](const std::vector<int>& I, const Jet&) {
        Jet v(0.0);
        std::vector<int> J = I;
        for (int e = 0; e < kJetVars; ++e) {
            J[slot] = e;
            v += G.ginv(I[slot], e) * T.t.at(J);
        }
        r.t.at(I) = v;
    });
    return r;
}

// Gradient (raised) and covariant Hessian of a scalar.
inline Vec<Jet> gradient(const ChartGeometry& G, const Jet& f) {
    Vec<Jet> v(kJetVars);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) v[a] += G.ginv(a, b) * f.deriv(b);
    return v;
}
inline Matrix<Jet> cov_hessian(const ChartGeometry& G, const Jet& f) {
    Matrix<Jet> h(kJetVars, kJetVars);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) {
            Jet v = f.deriv(a).deriv(b);
            for (int c = 0; c < kJetVars; ++c) v -= G.Gamma.at({c, b, a}) * f.deriv(c);
            h(a, b) = v;
        }
    return h;
}
inline Jet laplacian(const ChartGeometry& G, const Jet& f) {
    Matrix<Jet> h = cov_hessian(G, f);
    Jet r(0.0);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) r += G.ginv(a, b) * h(a, b);
    return r;
}
inline Jet divergence(const ChartGeometry& G, const Vec<Jet>& v) {
    Jet r(0.0);
    for (int a = 0; a < kJetVars; ++a) {
        r += v[a].deriv(a);
        for (int b = 0; b < kJetVars; ++b) r += G.Gamma.at({a, a, b}) * v[b];
    }
    return r;
}

// Max |value| over the components of a jet-valued container.
inline double value_norm(const Jet& j) { return std::abs(j.value()); }
inline double value_norm(const Vec<Jet>& v) {
    double m = 0;
    for (int i = 0; i < v.dim(); ++i) m = std::max(m, std::abs(v[i].value()));
    return m;
}
inline double value_norm(const Matrix<Jet>& v) {
    double m = 0;
    for (const Jet& j : v.data) m = std::max(m, std::abs(j.value()));
    return m;
}
inline double value_norm(const KForm<Jet>& v) {
    double m = 0;
    for (const Jet& j : v.comp) m = std::max(m, std::abs(j.value()));
    return m;
}
inline double value_norm(const Tensor<Jet>& v) {
    double m = 0;
    for (const Jet& j : v.data) m = std::max(m, std::abs(j.value()));
    return m;
}

// Kernel of a jet-valued matrix by value-pivoted elimination; valid as jet
// fields wherever the pivot pattern is stable (the generic situation near the
// base point).
inline std::vector<Vec<Jet>> jet_nullspace(Matrix<Jet> m, double eps = 1e-9) {
    int rows = m.rows, cols = m.cols;
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        double best = eps;
        for (int i = r; i < rows; ++i)
            if (std::abs(m(i, c).value()) > best) {
                best = std::abs(m(i, c).value());
                piv = i;
            }
        if (piv < 0) continue;
        for (int j = 0; j < cols; ++j) std::swap(m(piv, j), m(r, j));
        Jet inv = 1.0 / m(r, c);
        for (int j = 0; j < cols; ++j) m(r, j) = inv * m(r, j);
        for (int i = 0; i < rows; ++i) {
            if (i == r || std::abs(m(i, c).value()) == 0.0) continue;
            Jet f = m(i, c);
            for (int j = 0; j < cols; ++j) m(i, j) = m(i, j) - f * m(r, j);
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<Vec<Jet>> basis;
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col) is_pivot[c] = true;
    for (int free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Vec<Jet> v(cols);
        v[free] = Jet(1.0);
        for (size_t k = 0; k < pivot_col.size(); ++k) v[pivot_col[k]] = -m(static_cast<int>(k), free);
        basis.push_back(v);
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Tractor bundle: splitting (sigma, mu^a, rho), fiber metric, connection.

struct TractorSplit {
    Jet sigma;
    Vec<Jet> mu = Vec<Jet>(kJetVars);  // contravariant
    Jet rho;
};

inline Vec<Jet> tractor_vector(const TractorSplit& s) {
    Vec<Jet> v(7);
    v[0] = s.rho;
    for (int a = 0; a < kJetVars; ++a) v[1 + a] = s.mu[a];
    v[6] = s.sigma;
    return v;
}
inline TractorSplit split_tractor(const Vec<Jet>& v) {
    TractorSplit s;
    s.rho = v[0];
    for (int a = 0; a < kJetVars; ++a) s.mu[a] = v[1 + a];
    s.sigma = v[6];
    return s;
}
inline Matrix<Jet> tractor_metric(const Matrix<Jet>& g) {
    Matrix<Jet> H(7, 7);
    H(0, 6) = Jet(1.0);
    H(6, 0) = Jet(1.0);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) H(1 + a, 1 + b) = g(a, b);
    return H;
}
inline Jet tractor_inner(const Matrix<Jet>& H, const Vec<Jet>& u, const Vec<Jet>& v) {
    Jet r(0.0);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) r += H(i, j) * u[i] * v[j];
    return r;
}

// Connection matrices C_b (7x7): for a tractor vector field v (components as
// jets), (D_b v)^m = d_b v^m + C_b[m][l] v^l; for covariant tractor indices
// the same matrices act with a minus sign and transposed contraction.  The
// tangent block carries the Levi-Civita Christoffel symbols; the off-blocks
// implement d_b X = Z_b, d_b Z_a = -g_ab Y - P_ba X, d_b Y = P^c_b Z_c for
// the adapted frame (X, Z_a, Y).
inline std::array<Matrix<Jet>, kJetVars> tractor_connection_matrices(const ChartGeometry& G) {
    std::array<Matrix<Jet>, kJetVars> C;
    for (int b = 0; b < kJetVars; ++b) {
        Matrix<Jet> m(7, 7);
        for (int cc = 0; cc < kJetVars; ++cc)
            for (int a = 0; a < kJetVars; ++a) m(1 + cc, 1 + a) = G.Gamma.at({cc, b, a});
        for (int a = 0; a < kJetVars; ++a) {
            m(0, 1 + a) = -G.P(b, a);                    // rho-row picks up -P_{ba} mu^a
            m(6, 1 + a) = -G.g(a, b);                    // sigma-row picks up -mu_b
        }
        m(1 + b, 0) = Jet(1.0);                          // mu-row picks up delta^a_b rho
        for (int cc = 0; cc < kJetVars; ++cc) {
            Jet v(0.0);
            for (int d = 0; d < kJetVars; ++d) v += G.ginv(cc, d) * G.P(d, b);
            m(1 + cc, 6) = v;                            // mu-row picks up P^c_b sigma
        }
        C[b] = m;
    }
    return C;
}

// Tractor covariant derivative of a standard-tractor section, slotwise:
// D_b (sigma, mu^a, rho) = (sigma_{,b} - mu_b,
//                           mu^a_{,b} + P^a_b sigma + delta^a_b rho,
//                           rho_{,b} - P_{bc} mu^c).
inline std::array<TractorSplit, kJetVars> tractor_connection(const ChartGeometry& G,
                                                             const TractorSplit& s) {
    JT dmu = cov_deriv(G, jt_vector(s.mu));
    std::array<TractorSplit, kJetVars> r;
    for (int b = 0; b < kJetVars; ++b) {
        TractorSplit d;
        d.sigma = s.sigma.deriv(b);
        for (int c = 0; c < kJetVars; ++c) d.sigma -= G.g(b, c) * s.mu[c];
        for (int a = 0; a < kJetVars; ++a) {
            Jet v = dmu.t.at({a, b});
            for (int c = 0; c < kJetVars; ++c) v += G.ginv(a, c) * G.P(c, b) * s.sigma;
            if (a == b) v += s.rho;
            d.mu[a] = v;
        }
        d.rho = s.rho.deriv(b);
        for (int c = 0; c < kJetVars; ++c) d.rho -= G.P(b, c) * s.mu[c];
        r[b] = d;
    }
    return r;
}

// Covariant derivative of a covariant tractor k-form along each chart
// direction.
inline std::array<KForm<Jet>, kJetVars> tractor_form_deriv(const ChartGeometry& G,
                                                           const KForm<Jet>& Phi) {
    auto C = tractor_connection_matrices(G);
    auto subsets = increasing_subsets(7, Phi.degree);
    std::array<KForm<Jet>, kJetVars> out;
    for (int b = 0; b < kJetVars; ++b) {
        KForm<Jet> r(7, Phi.degree);
        for (size_t s = 0; s < subsets.size(); ++s) {
            const auto& I = subsets[s];
            Jet v = Phi.comp[s].deriv(b);
            for (size_t slot = 0; slot < I.size(); ++slot)
                for (int m = 0; m < 7; ++m) {
                    const Jet& c = C[b](m, I[slot]);
                    if (c.is_zero()) continue;
                    std::vector<int> J = I;
                    J[slot] = m;
                    v -= c * Phi.component(J);
                }
            r.comp[s] = v;
        }
        out[b] = r;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Slot decomposition of a tractor 3-form:
//   Phi = e^1 ^ phi~  +  chi~  +  e^1 ^ e^7 ^ theta~  +  e^7 ^ psi~
// with phi, psi chart 2-forms, chi a chart 3-form, theta a chart 1-form
// (fiber slot 0 = e^1 direction, slot 6 = e^7 direction).

struct ThreeFormSplit {
    KForm<Jet> phi{kJetVars, 2};
    KForm<Jet> chi{kJetVars, 3};
    KForm<Jet> theta{kJetVars, 1};
    KForm<Jet> psi{kJetVars, 2};
};

inline KForm<Jet> assemble_3form(const ThreeFormSplit& f) {
    KForm<Jet> Phi(7, 3);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = a + 1; b < kJetVars; ++b) {
            Phi.set_coeff({1, 2 + a, 2 + b}, f.phi.component({a, b}));
            Phi.set_coeff({7, 2 + a, 2 + b}, f.psi.component({a, b}));
        }
    for (int a = 0; a < kJetVars; ++a) {
        // component({0,6,1+a}) = theta_a  <=>  coeff on labels {1, 2+a, 7}
        // with the sign of sorting (0,6,1+a) -> (0,1+a,6), i.e. -theta_a.
        Phi.set_coeff({1, 2 + a, 7}, -f.theta.component({a}));
    }
    for (int a = 0; a < kJetVars; ++a)
        for (int b = a + 1; b < kJetVars; ++b)
            for (int c = b + 1; c < kJetVars; ++c)
                Phi.set_coeff({2 + a, 2 + b, 2 + c}, f.chi.component({a, b, c}));
    return Phi;
}

inline ThreeFormSplit split_3form(const KForm<Jet>& Phi) {
    ThreeFormSplit f;
    for (int a = 0; a < kJetVars; ++a)
        for (int b = a + 1; b < kJetVars; ++b) {
            f.phi.set_coeff({1 + a, 1 + b}, Phi.component({0, 1 + a, 1 + b}));
            f.psi.set_coeff({1 + a, 1 + b}, Phi.component({6, 1 + a, 1 + b}));
        }
    for (int a = 0; a < kJetVars; ++a)
        f.theta.set_coeff({1 + a}, Phi.component({0, 6, 1 + a}));
    for (int a = 0; a < kJetVars; ++a)
        for (int b = a + 1; b < kJetVars; ++b)
            for (int c = b + 1; c < kJetVars; ++c)
                f.chi.set_coeff({1 + a, 1 + b, 1 + c}, Phi.component({1 + a, 1 + b, 1 + c}));
    return f;
}

// ---------------------------------------------------------------------------
// Splitting operators and the Einstein constant.

// L0 of a scale: (sigma, sigma^{,a}, -(1/5)(Lap sigma + P^b_b sigma)).
inline TractorSplit L0_standard(const ChartGeometry& G, const Jet& sigma) {
    TractorSplit s;
    s.sigma = sigma;
    s.mu = gradient(G, sigma);
    s.rho = (-1.0 / 5.0) * (laplacian(G, sigma) + G.Ptrace * sigma);
    return s;
}

// Trace-free part of (sigma_{;ab} + P_ab sigma): vanishes iff sigma is an
// almost Einstein scale.
inline Matrix<Jet> theta0_standard(const ChartGeometry& G, const Jet& sigma) {
    Matrix<Jet> h = cov_hessian(G, sigma);
    Matrix<Jet> m(kJetVars, kJetVars);
    Jet tr(0.0);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) {
            m(a, b) = h(a, b) + G.P(a, b) * sigma;
            tr += G.ginv(a, b) * m(a, b);
        }
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b) m(a, b) -= (1.0 / 5.0) * tr * G.g(a, b);
    return m;
}

// The Einstein constant lambda = -1/2 H(L0 sigma, L0 sigma), both via the
// tractor metric and via the direct formula
// (1/5) sigma (sigma_{,a}{}^a + P^a_a sigma) - 1/2 sigma_{,a} sigma^{,a}.
struct EinsteinConstant {
    Jet via_tractor;
    Jet via_formula;
};
inline EinsteinConstant einstein_constant(const ChartGeometry& G, const Jet& sigma) {
    EinsteinConstant r;
    TractorSplit s = L0_standard(G, sigma);
    Vec<Jet> v = tractor_vector(s);
    r.via_tractor = -0.5 * tractor_inner(tractor_metric(G.g), v, v);
    Jet grad2(0.0);
    for (int a = 0; a < kJetVars; ++a) grad2 += sigma.deriv(a) * s.mu[a];
    r.via_formula = (1.0 / 5.0) * sigma * (laplacian(G, sigma) + G.Ptrace * sigma) - 0.5 * grad2;
    return r;
}

// ---------------------------------------------------------------------------
// Derivative package of a chart 2-form, shared by L0_3form and the I/J/K
// expressions.

struct TwoFormDerivs {
    Tensor<Jet> D;      // phi_{ab;c}
    Tensor<Jet> DD;     // phi_{ab;cd} (first c, then d)
    KForm<Jet> A;       // phi_{[ab,c]}
    Vec<Jet> divphi;    // phi_{a b ,}{}^b  (= g^{bc} phi_{ab;c}), lower index a
    Vec<Jet> divup;     // raised
    KForm<Jet> bracket; // the recurring second-order combination B_ab (below)
};

// B_ab = (1/3) phi_{ab,c}{}^c + (2/3) phi_{c[a,b]}{}^c
//      + (1/2) phi_{c[a,}{}^c{}_{b]} + 4 P^c_{[a} phi_{b]c}.
inline TwoFormDerivs two_form_derivs(const ChartGeometry& G, const KForm<Jet>& phi) {
    const int n = kJetVars;
    TwoFormDerivs R;
    JT jphi = jt_form(phi);
    JT d1 = cov_deriv(G, jphi);
    JT d2 = cov_deriv(G, d1);
    R.D = d1.t;
    R.DD = d2.t;
    R.A = antisymmetrize(R.D);
    R.divphi = Vec<Jet>(n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) R.divphi[a] += G.ginv(b, c) * R.D.at({a, b, c});
    R.divup = Vec<Jet>(n);
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) R.divup[a] += G.ginv(a, c) * R.divphi[c];

    Matrix<Jet> lap(n, n), T1(n, n), T2(n, n), Pphi(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Jet l(0.0), t1(0.0), t2(0.0), pp(0.0);
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    l += G.ginv(c, d) * R.DD.at({a, b, c, d});
                    t1 += G.ginv(c, d) * R.DD.at({c, a, b, d});  // phi_{ca,b}{}^c
                    t2 += G.ginv(c, d) * R.DD.at({c, a, d, b});  // phi_{ca,}{}^c{}_b
                }
            for (int c = 0; c < n; ++c)
                for (int e = 0; e < n; ++e)
                    pp += G.ginv(c, e) * G.P(e, a) * phi.component({b, c});  // P^c_a phi_{bc}
            lap(a, b) = l;
            T1(a, b) = t1;
            T2(a, b) = t2;
            Pphi(a, b) = pp;
        }
    R.bracket = KForm<Jet>(n, 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            Jet v = (1.0 / 3.0) * lap(a, b) + (1.0 / 3.0) * (T1(a, b) - T1(b, a)) +
                    (1.0 / 4.0) * (T2(a, b) - T2(b, a)) + 2.0 * (Pphi(a, b) - Pphi(b, a));
            R.bracket.set_coeff({1 + a, 1 + b}, v);
        }
    return R;
}

// L0 of a weighted chart 2-form phi: the full tractor 3-form with slots
//   chi = phi_{[ab,c]},  theta_c = -(1/4) phi_{bc,}{}^b,
//   psi = (1/5)( -B - P^c_c phi ),  bottom slot phi.
inline ThreeFormSplit L0_3form_split(const ChartGeometry& G, const KForm<Jet>& phi) {
    const int n = kJetVars;
    TwoFormDerivs R = two_form_derivs(G, phi);
    ThreeFormSplit f;
    f.phi = phi;
    f.chi = R.A;
    f.theta = KForm<Jet>(n, 1);
    for (int c = 0; c < n; ++c) {
        Jet v(0.0);
        for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d) v += G.ginv(b, d) * R.D.at({b, c, d});
        f.theta.set_coeff({1 + c}, (-1.0 / 4.0) * v);
    }
    f.psi = KForm<Jet>(n, 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            Jet v = (-1.0 / 5.0) * (R.bracket.component({a, b}) + G.Ptrace * phi.component({a, b}));
            f.psi.set_coeff({1 + a, 1 + b}, v);
        }
    return f;
}
inline KForm<Jet> L0_3form(const ChartGeometry& G, const KForm<Jet>& phi) {
    return assemble_3form(L0_3form_split(G, phi));
}

// First BGG operator on 2-forms: the totally trace-free, non-antisymmetric
// part of the first derivative,
//   phi_{ab,c} - phi_{[ab,c]} - (1/2) g_{c[a} phi_{b]d,}{}^d.
inline Tensor<Jet> theta0_3form(const ChartGeometry& G, const KForm<Jet>& phi) {
    const int n = kJetVars;
    TwoFormDerivs R = two_form_derivs(G, phi);
    Tensor<Jet> r(n, 3);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Jet v = R.D.at({a, b, c}) - R.A.component({a, b, c}) +
                        0.25 * (G.g(c, a) * R.divphi[b] - G.g(c, b) * R.divphi[a]);
                r.at({a, b, c}) = v;
            }
    return r;
}

// Normality residuals: how far the splitting of a scale / 2-form is from
// being parallel for the tractor connection.
inline double normality_residual(const ChartGeometry& G, const TractorSplit& s) {
    auto d = tractor_connection(G, s);
    double m = 0;
    for (const TractorSplit& ds : d) {
        m = std::max(m, value_norm(ds.sigma));
        m = std::max(m, value_norm(ds.mu));
        m = std::max(m, value_norm(ds.rho));
    }
    return m;
}
inline double normality_residual(const ChartGeometry& G, const KForm<Jet>& Phi) {
    auto d = tractor_form_deriv(G, Phi);
    double m = 0;
    for (const KForm<Jet>& f : d) m = std::max(m, value_norm(f));
    return m;
}

// ---------------------------------------------------------------------------
// The vector field of a (scale, 2-form) pair, and the pi_7 projection.

// xi^a = -phi^{ab} sigma_{,b} + (1/4) phi^{ab}{}_{,b} sigma.
inline Vec<Jet> xi_iota7(const ChartGeometry& G, const Jet& sigma, const KForm<Jet>& phi) {
    const int n = kJetVars;
    TwoFormDerivs R = two_form_derivs(G, phi);
    Vec<Jet> xi(n);
    for (int a = 0; a < n; ++a) {
        Jet v(0.0);
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    v -= G.ginv(a, c) * G.ginv(b, d) * phi.component({c, d}) * sigma.deriv(b);
        xi[a] = v + 0.25 * R.divup[a] * sigma;
    }
    return xi;
}

// pi_7(eta) = (1/2) phi^{ab} eta_{a,b} - (1/4) phi_{ab,}{}^b eta^a for a
// chart 1-form eta; normalized so that pi_7(lowered xi(sigma)) = sigma, which
// pins the overall constant that a bare transcription leaves ambiguous.
inline Jet pi7(const ChartGeometry& G, const KForm<Jet>& phi, const KForm<Jet>& eta) {
    const int n = kJetVars;
    TwoFormDerivs R = two_form_derivs(G, phi);
    JT deta = cov_deriv(G, jt_covector(eta));
    Jet r(0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Jet phiup(0.0);
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d)
                    phiup += G.ginv(a, c) * G.ginv(b, d) * phi.component({c, d});
            r += 0.5 * phiup * deta.t.at({a, b});
        }
    for (int a = 0; a < n; ++a) {
        Jet etaup(0.0);
        for (int b = 0; b < n; ++b) etaup += G.ginv(a, b) * eta.component({b});
        // phi_{ab,}{}^b = -divphi_a with the stored orientation of divphi
        r -= 0.25 * (-R.divphi[a]) * etaup;
    }
    return r;
}

// Conformal Killing residual: trace-free symmetrized covariant derivative of
// a vector field; the plain Killing residual is the symmetrized part.
struct KillingResiduals {
    double killing;
    double conformal_killing;
};
inline KillingResiduals conformal_killing_residual(const ChartGeometry& G, const Vec<Jet>& xi) {
    const int n = kJetVars;
    JT dxi = cov_deriv(G, jt_covector(lower_vector(G.g, xi)));
    Matrix<Jet> sym(n, n);
    Jet tr(0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            sym(a, b) = 0.5 * (dxi.t.at({a, b}) + dxi.t.at({b, a}));
            tr += G.ginv(a, b) * sym(a, b);
        }
    KillingResiduals r;
    r.killing = value_norm(sym);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) sym(a, b) -= (1.0 / 5.0) * tr * G.g(a, b);
    r.conformal_killing = value_norm(sym);
    return r;
}

// ---------------------------------------------------------------------------
// The I / J / K two-forms of a (scale, 2-form) pair.

struct IJKForms {
    KForm<Jet> I{kJetVars, 2};
    KForm<Jet> J{kJetVars, 2};
    KForm<Jet> K{kJetVars, 2};
};

inline IJKForms ijk_forms(const ChartGeometry& G, const Jet& sigma, const KForm<Jet>& phi) {
    const int n = kJetVars;
    TwoFormDerivs R = two_form_derivs(G, phi);
    Vec<Jet> gradsig = gradient(G, sigma);
    Jet lapsig = laplacian(G, sigma);

    // antisym( sigma_{,c} phi_{ab} ) and antisym( phi_{ab} divphi_c )
    Tensor<Jet> V1(n, 3), V2(n, 3);
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                V1.at({c, a, b}) = sigma.deriv(c) * phi.component({a, b});
                V2.at({a, b, c}) = phi.component({a, b}) * R.divphi[c];
            }
    KForm<Jet> W1 = antisymmetrize(V1), W2 = antisymmetrize(V2);

    IJKForms out;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            Jet sA(0.0), sW1(0.0), sW2(0.0), sGphi(0.0);
            for (int c = 0; c < n; ++c) {
                sA += gradsig[c] * R.A.component({a, b, c});
                sW1 += gradsig[c] * W1.component({c, a, b});
                sW2 += gradsig[c] * W2.component({a, b, c});
                sGphi += gradsig[c] * (sigma.deriv(a) * phi.component({b, c}) -
                                       sigma.deriv(b) * phi.component({a, c}));
            }
            Jet halfdiv = 0.25 * (sigma.deriv(a) * R.divphi[b] - sigma.deriv(b) * R.divphi[a]);
            Jet Bab = R.bracket.component({a, b});
            Jet phiab = phi.component({a, b});

            Jet I = (1.0 / 5.0) * sigma * sigma * Bab - sigma * sA - sigma * halfdiv -
                    (1.0 / 5.0) * sigma * lapsig * phiab + 3.0 * sW1;
            Jet K = (-1.0 / 5.0) * sigma * sigma * (Bab + 2.0 * G.Ptrace * phiab) + sigma * sA +
                    sigma * halfdiv - (1.0 / 5.0) * sigma * lapsig * phiab - sGphi;
            Jet J(0.0);
            for (int c = 0; c < n; ++c) J -= 0.25 * sigma * R.divup[c] * R.A.component({a, b, c});
            J += 0.75 * sW2;

            out.I.set_coeff({1 + a, 1 + b}, I);
            out.J.set_coeff({1 + a, 1 + b}, J);
            out.K.set_coeff({1 + a, 1 + b}, K);
        }
    return out;
}

// The one-parameter family phi' = phi + Abar I + B J (parameters constrained
// by -eps Abar^2 + 2 Abar + B^2 = 0 when a family member is intended).
inline KForm<Jet> family_2form(const ChartGeometry& G, const Jet& sigma, const KForm<Jet>& phi,
                               double Abar, double B) {
    IJKForms f = ijk_forms(G, sigma, phi);
    return phi + Jet(Abar) * f.I + Jet(B) * f.J;
}

// Independent transcription of the same family formula, written out term by
// term with its own derivative bookkeeping; used to cross-check family_2form.
inline KForm<Jet> family_2form_direct(const ChartGeometry& G, const Jet& sigma,
                                      const KForm<Jet>& phi, double Abar, double B) {
    const int n = kJetVars;
    JT d1 = cov_deriv(G, jt_form(phi));
    JT d2 = cov_deriv(G, d1);
    auto phi_at = [&](int a, int b) { return phi.component({a, b}); };
    // phi_{ab,c} and phi_{ab,cd}
    auto Dp = [&](int a, int b, int c) { return d1.t.at({a, b, c}); };
    auto DDp = [&](int a, int b, int c, int d) { return d2.t.at({a, b, c, d}); };
    Vec<Jet> gs(n);  // sigma^{,a}
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) gs[a] += G.ginv(a, b) * sigma.deriv(b);
    Jet lap = laplacian(G, sigma);
    Vec<Jet> div(n);  // phi_{ad,}{}^d
    for (int a = 0; a < n; ++a)
        for (int d = 0; d < n; ++d)
            for (int e = 0; e < n; ++e) div[a] += G.ginv(d, e) * Dp(a, d, e);
    KForm<Jet> out(n, 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            // --- coefficient of Abar ---
            Jet lapphi(0.0), t1(0.0), t1r(0.0), t2(0.0), t2r(0.0), pp(0.0), ppr(0.0);
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    lapphi += G.ginv(c, d) * DDp(a, b, c, d);
                    t1 += G.ginv(c, d) * DDp(c, a, b, d);
                    t1r += G.ginv(c, d) * DDp(c, b, a, d);
                    t2 += G.ginv(c, d) * DDp(c, a, d, b);
                    t2r += G.ginv(c, d) * DDp(c, b, d, a);
                    pp += G.ginv(c, d) * G.P(d, a) * phi_at(b, c);
                    ppr += G.ginv(c, d) * G.P(d, b) * phi_at(a, c);
                }
            Jet bracket = (1.0 / 3.0) * lapphi + (2.0 / 3.0) * 0.5 * (t1 - t1r) +
                          (1.0 / 2.0) * 0.5 * (t2 - t2r) + 4.0 * 0.5 * (pp - ppr);
            // sigma^{,c} phi_{[ca,b]}
            Jet term2(0.0);
            for (int c = 0; c < n; ++c)
                term2 += gs[c] * (1.0 / 6.0) *
                         (Dp(c, a, b) - Dp(a, c, b) + Dp(a, b, c) - Dp(c, b, a) + Dp(b, c, a) -
                          Dp(b, a, c));
            // sigma_{,[a} phi_{b]c,}{}^c
            Jet term3 = 0.5 * (sigma.deriv(a) * div[b] - sigma.deriv(b) * div[a]);
            // sigma^{,c} sigma_{,[c} phi_{ab]}
            Jet term5(0.0);
            for (int c = 0; c < n; ++c)
                term5 += gs[c] * (1.0 / 6.0) *
                         (sigma.deriv(c) * phi_at(a, b) - sigma.deriv(a) * phi_at(c, b) +
                          sigma.deriv(a) * phi_at(b, c) - sigma.deriv(c) * phi_at(b, a) +
                          sigma.deriv(b) * phi_at(c, a) - sigma.deriv(b) * phi_at(a, c));
            Jet coefA = (1.0 / 5.0) * sigma * sigma * bracket - sigma * term2 -
                        0.5 * sigma * term3 - (1.0 / 5.0) * sigma * lap * phi_at(a, b) +
                        3.0 * term5;
            // --- coefficient of B ---
            Jet coefB(0.0);
            for (int c = 0; c < n; ++c) {
                Jet divup(0.0);
                for (int e = 0; e < n; ++e) divup += G.ginv(c, e) * div[e];
                Jet anti = (1.0 / 6.0) * (Dp(a, b, c) - Dp(b, a, c) + Dp(b, c, a) - Dp(a, c, b) +
                                          Dp(c, a, b) - Dp(c, b, a));
                coefB -= 0.25 * sigma * divup * anti;
                Jet anti2 = (1.0 / 6.0) *
                            (phi_at(a, b) * div[c] - phi_at(b, a) * div[c] +
                             phi_at(b, c) * div[a] - phi_at(a, c) * div[b] +
                             phi_at(c, a) * div[b] - phi_at(c, b) * div[a]);
                coefB += 0.75 * gs[c] * anti2;
            }
            out.set_coeff({1 + a, 1 + b}, phi_at(a, b) + Abar * coefA + B * coefB);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Lie derivatives.  All inputs are jets at one seeded point, so ordinary
// partial derivatives of the component functions are available directly.

inline Vec<Jet> lie_bracket(const Vec<Jet>& u, const Vec<Jet>& v) {
    Vec<Jet> r(kJetVars);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b)
            r[a] += u[b] * v[a].deriv(b) - v[b] * u[a].deriv(b);
    return r;
}

// Weighted Lie derivative of a covariant tensor of weight w:
// L_xi T - (w/5) (div xi) T.
inline Tensor<Jet> lie_derivative_weighted(const ChartGeometry& G, const Vec<Jet>& xi,
                                           const Tensor<Jet>& T, int rank_check, double w) {
    const int n = kJetVars;
    if (T.rank != rank_check) throw std::invalid_argument("lie_derivative_weighted: rank mismatch");
    Jet divxi = divergence(G, xi);
    Tensor<Jet> r(n, T.rank);
    r.for_each([&](const std::vector<int>& I, const Jet&) {
        Jet v(0.0);
        for (int b = 0; b < n; ++b) v += xi[b] * T.at(I).deriv(b);
        for (size_t s = 0; s < I.size(); ++s) {
            std::vector<int> J = I;
            for (int b = 0; b < n; ++b) {
                J[s] = b;
                v += xi[b].deriv(I[s]) * T.at(J);
            }
        }
        v -= (w / 5.0) * divxi * T.at(I);
        r.at(I) = v;
    });
    return r;
}
inline Jet lie_derivative_weighted(const ChartGeometry& G, const Vec<Jet>& xi, const Jet& f,
                                   double w) {
    Jet v(0.0);
    for (int b = 0; b < kJetVars; ++b) v += xi[b] * f.deriv(b);
    return v - (w / 5.0) * divergence(G, xi) * f;
}
inline KForm<Jet> lie_derivative_weighted(const ChartGeometry& G, const Vec<Jet>& xi,
                                          const KForm<Jet>& f, double w) {
    Tensor<Jet> t = lie_derivative_weighted(G, xi, tensor_from_form(f), f.degree, w);
    return antisymmetrize(t);
}

// ---------------------------------------------------------------------------
// Distribution utilities.

struct GrowthVector {
    int r1, r2, r3;
    bool is_235() const { return r1 == 2 && r2 == 3 && r3 == 5; }
};

// Growth of the span of two vector fields under Lie brackets, at the base
// point of the jets.
inline GrowthVector growth_vector(const Vec<Jet>& u, const Vec<Jet>& v, double eps = 1e-7) {
    std::vector<Vec<Jet>> fields{u, v};
    auto rank_of = [&](const std::vector<Vec<Jet>>& fs) {
        Matrix<double> m(static_cast<int>(fs.size()), kJetVars);
        for (size_t i = 0; i < fs.size(); ++i)
            for (int a = 0; a < kJetVars; ++a) m(static_cast<int>(i), a) = fs[i][a].value();
        return matrix_rank(m, eps);
    };
    GrowthVector g{};
    g.r1 = rank_of(fields);
    Vec<Jet> uv = lie_bracket(u, v);
    fields.push_back(uv);
    g.r2 = rank_of(fields);
    fields.push_back(lie_bracket(u, uv));
    fields.push_back(lie_bracket(v, uv));
    g.r3 = rank_of(fields);
    return g;
}

// Max |phi(u,v)| style pairing residual: how far the 2-form is from
// annihilating the span of u against everything / against v.
inline double two_form_on_pair(const KForm<Jet>& phi, const Vec<Jet>& u, const Vec<Jet>& v) {
    Jet r(0.0);
    for (int a = 0; a < kJetVars; ++a)
        for (int b = 0; b < kJetVars; ++b)
            if (a != b) r += 0.5 * phi.component({a, b}) * (u[a] * v[b] - u[b] * v[a]);
    // phi(u,v) = phi_ab u^a v^b over a<b twice; the loop above sums all pairs
    // with the antisymmetrized product, which equals phi_ab u^a v^b.
    return std::abs(r.value());
}

struct DistributionChecks {
    GrowthVector growth;
    double phi_on_span;  // |phi'(u,v)| at the point
};
inline DistributionChecks distribution_checks(const KForm<Jet>& phi, const Vec<Jet>& u,
                                              const Vec<Jet>& v, double eps = 1e-7) {
    DistributionChecks r{growth_vector(u, v, eps), two_form_on_pair(phi, u, v)};
    return r;
}

// ---------------------------------------------------------------------------
// Curved-orbit classification at a point from the (sigma, phi) data.

struct PointClassification {
    OrbitLabel label;
    bool ambiguous = false;
    double sigma_value = 0;
    double xi_norm = 0;
    double mu_norm = 0;
    double rho_value = 0;
};

inline PointClassification classify_point(const ChartGeometry& G, const Jet& sigma,
                                          const KForm<Jet>& phi, double tol = 1e-8,
                                          double band = 10.0) {
    const int n = kJetVars;
    PointClassification out;
    double s = sigma.value();
    out.sigma_value = s;
    auto in_band = [&](double q) { return std::abs(q) >= tol && std::abs(q) < band * tol; };
    if (std::abs(s) >= tol) {
        out.ambiguous = in_band(s);
        out.label = s > 0 ? OrbitLabel::M5p : OrbitLabel::M5m;
        return out;
    }
    Vec<Jet> xi = xi_iota7(G, sigma, phi);
    out.xi_norm = value_norm(xi);
    if (out.xi_norm >= tol) {
        out.ambiguous = in_band(out.xi_norm);
        out.label = OrbitLabel::M4;
        return out;
    }
    Vec<Jet> mu = gradient(G, sigma);
    out.mu_norm = value_norm(mu);
    if (out.mu_norm >= tol) {
        out.ambiguous = in_band(out.mu_norm);
        // mu inside the image of phi with both indices raised -> the neutral
        // M2 orbit; otherwise the sign of mu^c theta_c separates M2+ / M2-.
        Matrix<double> m(n, n + 1);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                double w = 0;
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        w += G.ginv(a, c).value() * G.ginv(b, d).value() *
                             phi.component({c, d}).value();
                m(a, b) = w;
            }
            m(a, n) = mu[a].value();
        }
        Matrix<double> m0 = m;
        for (int a = 0; a < n; ++a) m0(a, n) = 0;
        double scale = std::max(out.mu_norm, value_norm(phi));
        if (matrix_rank(m, tol * band * scale) == matrix_rank(m0, tol * band * scale)) {
            out.label = OrbitLabel::M2;
            return out;
        }
        ThreeFormSplit f = L0_3form_split(G, phi);
        double mt = 0;
        for (int c = 0; c < n; ++c) mt += f.theta.component({c}).value() * mu[c].value();
        out.ambiguous = out.ambiguous || in_band(mt);
        // Calibrated against the fiber-side ray classifier on the flat model:
        // a positive pairing mu^c theta_c lands on the minus orbit.
        out.label = mt > 0 ? OrbitLabel::M2m : OrbitLabel::M2p;
        return out;
    }
    double rho = (-1.0 / 5.0) * (laplacian(G, sigma).value() + (G.Ptrace * sigma).value());
    out.rho_value = rho;
    out.ambiguous = in_band(rho);
    out.label = rho > 0 ? OrbitLabel::M0p : OrbitLabel::M0m;
    return out;
}

// ---------------------------------------------------------------------------
// Sasaki-type residuals: for a metric h with unit field xi,
//   r1 = |h(xi,xi) - 1|, r2 = |xi_{(a;b)}|,
//   r3 = |xi^a{}_{;bc} - eps (xi^a h_{bc} - delta^a_c xi_b)|,
// all with respect to h's own Levi-Civita connection.
struct SasakiResiduals {
    double unit;
    double killing;
    double curvature_identity;
};
inline SasakiResiduals sasaki_residuals(const ChartGeometry& G, const Vec<Jet>& xi, double eps) {
    const int n = kJetVars;
    SasakiResiduals r{};
    Jet norm(0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) norm += G.g(a, b) * xi[a] * xi[b];
    r.unit = std::abs(norm.value() - 1.0);
    KForm<Jet> xilow = lower_vector(G.g, xi);
    JT dxi = cov_deriv(G, jt_covector(xilow));
    double m = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            m = std::max(m, std::abs(0.5 * (dxi.t.at({a, b}) + dxi.t.at({b, a})).value()));
    r.killing = m;
    JT ddxi = cov_deriv(G, cov_deriv(G, jt_vector(xi)));
    m = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Jet expect = eps * (xi[a] * G.g(b, c) -
                                    (a == c ? xilow.component({b}) : Jet(0.0)));
                // stored as xi^a{}_{;b c}: first derivative b, then c
                m = std::max(m, std::abs((ddxi.t.at({a, b, c}) - expect).value()));
            }
    r.curvature_identity = m;
    return r;
}

// ---------------------------------------------------------------------------
// Open-orbit construction of the compatible 2-form from a (2,3,5)
// distribution span and its symmetry field, in the scale where sigma = 1:
// with k = grad xi (as an endomorphism) and E = k(D),
//   phi-sharp = -2 eps k P_E,   psi-sharp = k P_D,   theta = xi-flat,
// where P_E, P_D are the projections attached to the basis
// (u, v, k u, k v, xi).
struct ScaleFormData {
    KForm<Jet> phi{kJetVars, 2};
    KForm<Jet> psi{kJetVars, 2};
    KForm<Jet> theta{kJetVars, 1};
    Matrix<Jet> k{kJetVars, kJetVars};  // nabla xi as an endomorphism
};

inline ScaleFormData phi_from_distribution(const ChartGeometry& G, const Vec<Jet>& u,
                                           const Vec<Jet>& v, const Vec<Jet>& xi, double eps) {
    const int n = kJetVars;
    ScaleFormData out;
    JT dxi = cov_deriv(G, jt_vector(xi));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out.k(a, b) = dxi.t.at({a, b});
    auto apply = [&](const Matrix<Jet>& m, const Vec<Jet>& w) { return m * w; };
    Vec<Jet> ku = apply(out.k, u), kv = apply(out.k, v);
    Matrix<Jet> B(n, n);
    std::array<const Vec<Jet>*, 5> cols{&u, &v, &ku, &kv, &xi};
    for (int j = 0; j < n; ++j)
        for (int a = 0; a < n; ++a) B(a, j) = (*cols[j])[a];
    Matrix<Jet> Binv = matrix_inverse(B);
    auto projector = [&](std::initializer_list<int> keep) {
        Matrix<Jet> D(n, n);
        for (int j : keep) D(j, j) = Jet(1.0);
        return B * D * Binv;
    };
    Matrix<Jet> PE = projector({2, 3});
    Matrix<Jet> PD = projector({0, 1});
    Matrix<Jet> phisharp = Jet(-2.0 * eps) * (out.k * PE);
    Matrix<Jet> psisharp = out.k * PD;
    auto lower_antisym = [&](const Matrix<Jet>& m) {
        KForm<Jet> f(n, 2);
        Matrix<Jet> low = G.g * m;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b)
                f.set_coeff({1 + a, 1 + b}, 0.5 * (low(a, b) - low(b, a)));
        return f;
    };
    out.phi = lower_antisym(phisharp);
    out.psi = lower_antisym(psisharp);
    out.theta = lower_vector(G.g, xi);
    return out;
}

// Inverse of the construction above: on the open orbit (sigma-scale data),
// the distribution is ker(phi-sharp) with the symmetry direction projected
// out; returns the best-conditioned spanning pair.
inline std::pair<Vec<Jet>, Vec<Jet>> distribution_from_phi(const ChartGeometry& G,
                                                           const KForm<Jet>& phi,
                                                           const Vec<Jet>& xi,
                                                           double eps = 1e-8) {
    const int n = kJetVars;
    Matrix<Jet> M(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) M(a, b) += G.ginv(a, c) * phi.component({c, b});
    auto N = jet_nullspace(M, eps);
    KForm<Jet> xil = lower_vector(G.g, xi);
    Jet nrm(0.0);
    for (int a = 0; a < n; ++a) nrm += xil.component({a}) * xi[a];
    std::vector<Vec<Jet>> cand;
    for (const auto& w : N) {
        Jet c(0.0);
        for (int a = 0; a < n; ++a) c += xil.component({a}) * w[a];
        Vec<Jet> r(n);
        for (int a = 0; a < n; ++a) r[a] = w[a] - (c / nrm) * xi[a];
        cand.push_back(r);
    }
    if (cand.size() < 2) throw std::runtime_error("distribution_from_phi: kernel too small");
    size_t bi = 0, bj = 1;
    double best = -1;
    for (size_t i = 0; i < cand.size(); ++i)
        for (size_t j = i + 1; j < cand.size(); ++j) {
            double g00 = 0, g01 = 0, g11 = 0;
            for (int a = 0; a < n; ++a) {
                g00 += cand[i][a].value() * cand[i][a].value();
                g01 += cand[i][a].value() * cand[j][a].value();
                g11 += cand[j][a].value() * cand[j][a].value();
            }
            double det = g00 * g11 - g01 * g01;
            if (det > best) {
                best = det;
                bi = i;
                bj = j;
            }
        }
    return {cand[bi], cand[bj]};
}

}  // namespace ae
