// Truncated Taylor arithmetic ("jets") in five variables.
//
// A Jet stores the Taylor coefficients c_alpha = d^alpha f / alpha! of a
// scalar function at a base point, for all multi-indices |alpha| <= ord with
// ord at most 4.  Arithmetic and the elementary functions propagate these
// coefficients exactly (to floating-point roundoff), so every derivative the
// chart-level calculus needs -- Christoffel symbols, curvature, Schouten
// tensor, splitting operators, normality residuals -- is obtained without
// finite differencing.
//
// The truncation order is tracked per value: differentiating an order-m jet
// yields an order-(m-1) jet, and binary operations truncate to the smaller
// order of their operands.  Order 4 on the inputs is enough for third
// derivatives of derived first-order quantities, which is the deepest demand
// made by the tractor calculus here.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ae/scalar.hpp"

namespace ae {

inline constexpr int kJetVars = 5;
inline constexpr int kJetMaxOrder = 4;
inline constexpr int kJetCoeffs = 126;  // C(5 + 4, 4)

namespace jetdet {

struct JetTables {
    std::vector<std::array<int, kJetVars>> alpha;  // position -> multi-index
    std::vector<int> deg;                          // position -> |alpha|
    std::vector<double> factorial;                 // position -> alpha!
    std::array<int, 3125> pos_of_code{};           // base-5 code -> position (-1 if |alpha| > 4)
    std::vector<std::array<int, 3>> prod;          // (i, j, k) with alpha_i + alpha_j = alpha_k

    static int code(const std::array<int, kJetVars>& a) {
        int c = 0;
        for (int i = kJetVars - 1; i >= 0; --i) c = c * 5 + a[i];
        return c;
    }
};

inline const JetTables& jet_tables() {
    static const JetTables t = [] {
        JetTables t;
        t.pos_of_code.fill(-1);
        for (int d = 0; d <= kJetMaxOrder; ++d) {
            // Enumerate |alpha| = d by scanning base-5 digit codes in order.
            for (int code = 0; code < 3125; ++code) {
                std::array<int, kJetVars> a;
                int c = code, sum = 0;
                for (int i = 0; i < kJetVars; ++i) {
                    a[i] = c % 5;
                    sum += a[i];
                    c /= 5;
                }
                if (sum != d) continue;
                t.pos_of_code[code] = static_cast<int>(t.alpha.size());
                t.alpha.push_back(a);
                t.deg.push_back(d);
                double f = 1;
                for (int i = 0; i < kJetVars; ++i)
                    for (int m = 2; m <= a[i]; ++m) f *= m;
                t.factorial.push_back(f);
            }
        }
        if (static_cast<int>(t.alpha.size()) != kJetCoeffs)
            throw std::logic_error("jet table enumeration is inconsistent");
        for (int i = 0; i < kJetCoeffs; ++i)
            for (int j = 0; j < kJetCoeffs; ++j) {
                if (t.deg[i] + t.deg[j] > kJetMaxOrder) continue;
                std::array<int, kJetVars> s;
                for (int q = 0; q < kJetVars; ++q) s[q] = t.alpha[i][q] + t.alpha[j][q];
                t.prod.push_back({i, j, t.pos_of_code[JetTables::code(s)]});
            }
        return t;
    }();
    return t;
}

}  // namespace jetdet

class Jet {
public:
    Jet() : ord_(kJetMaxOrder) { c_.fill(0.0); }
    explicit Jet(double v, int ord = kJetMaxOrder) : ord_(check_order(ord)) {
        c_.fill(0.0);
        c_[0] = v;
    }

    // Coordinate function x_i (0-based) with the given value at the base point.
    static Jet variable(int i, double value, int ord = kJetMaxOrder) {
        if (i < 0 || i >= kJetVars) throw std::invalid_argument("Jet::variable: bad index");
        Jet j(value, ord);
        if (ord >= 1) {
            std::array<int, kJetVars> a{};
            a[i] = 1;
            j.c_[jetdet::jet_tables().pos_of_code[jetdet::JetTables::code(a)]] = 1.0;
        }
        return j;
    }

    int order() const { return ord_; }
    double value() const { return c_[0]; }
    const std::array<double, kJetCoeffs>& coeffs() const { return c_; }
    double& coeff(int pos) { return c_[pos]; }
    double coeff(int pos) const { return c_[pos]; }

    // Taylor coefficient for the multi-index (c_alpha); zero beyond ord.
    double taylor(const std::array<int, kJetVars>& alpha) const {
        const auto& t = jetdet::jet_tables();
        int code = jetdet::JetTables::code(alpha);
        int p = (code >= 0 && code < 3125) ? t.pos_of_code[code] : -1;
        if (p < 0) return 0.0;
        return t.deg[p] <= ord_ ? c_[p] : 0.0;
    }

    // Partial-derivative value d^alpha f evaluated at the base point.
    double partial(const std::array<int, kJetVars>& alpha) const {
        const auto& t = jetdet::jet_tables();
        int p = t.pos_of_code[jetdet::JetTables::code(alpha)];
        if (p < 0 || t.deg[p] > ord_) throw std::invalid_argument("Jet::partial: order exceeded");
        return c_[p] * t.factorial[p];
    }
    double partial(std::initializer_list<int> vars) const {
        std::array<int, kJetVars> a{};
        for (int v : vars) {
            if (v < 0 || v >= kJetVars) throw std::invalid_argument("Jet::partial: bad variable");
            ++a[v];
        }
        return partial(a);
    }

    // d/dx_i as a jet of one lower order.
    Jet deriv(int i) const {
        if (ord_ == 0) throw std::invalid_argument("Jet::deriv: order-0 jet");
        const auto& t = jetdet::jet_tables();
        Jet r(0.0, ord_ - 1);
        for (int p = 0; p < kJetCoeffs; ++p) {
            if (t.deg[p] > ord_ || t.alpha[p][i] == 0) continue;
            std::array<int, kJetVars> a = t.alpha[p];
            a[i] -= 1;
            r.c_[t.pos_of_code[jetdet::JetTables::code(a)]] = c_[p] * t.alpha[p][i];
        }
        return r;
    }

    Jet truncated(int ord) const {
        check_order(ord);
        Jet r = *this;
        r.ord_ = std::min(ord_, ord);
        const auto& t = jetdet::jet_tables();
        for (int p = 0; p < kJetCoeffs; ++p)
            if (t.deg[p] > r.ord_) r.c_[p] = 0.0;
        return r;
    }

    friend Jet operator+(const Jet& x, const Jet& y) {
        Jet r = x.truncated(y.ord_);
        const auto& t = jetdet::jet_tables();
        for (int p = 0; p < kJetCoeffs; ++p)
            if (t.deg[p] <= r.ord_) r.c_[p] += y.c_[p];
        return r;
    }
    friend Jet operator-(const Jet& x, const Jet& y) {
        Jet r = x.truncated(y.ord_);
        const auto& t = jetdet::jet_tables();
        for (int p = 0; p < kJetCoeffs; ++p)
            if (t.deg[p] <= r.ord_) r.c_[p] -= y.c_[p];
        return r;
    }
    friend Jet operator-(const Jet& x) {
        Jet r = x;
        for (double& v : r.c_) v = -v;
        return r;
    }
    friend Jet operator*(const Jet& x, const Jet& y) {
        int ord = std::min(x.ord_, y.ord_);
        Jet r(0.0, ord);
        const auto& t = jetdet::jet_tables();
        for (const auto& [i, j, k] : t.prod) {
            if (t.deg[k] > ord) continue;
            double a = x.c_[i];
            if (a == 0.0) continue;
            double b = y.c_[j];
            if (b == 0.0) continue;
            r.c_[k] += a * b;
        }
        return r;
    }
    friend Jet operator*(double s, const Jet& x) {
        Jet r = x;
        for (double& v : r.c_) v *= s;
        return r;
    }
    friend Jet operator*(const Jet& x, double s) { return s * x; }
    friend Jet operator+(const Jet& x, double s) {
        Jet r = x;
        r.c_[0] += s;
        return r;
    }
    friend Jet operator+(double s, const Jet& x) { return x + s; }
    friend Jet operator-(const Jet& x, double s) { return x + (-s); }
    friend Jet operator-(double s, const Jet& x) { return (-x) + s; }
    friend Jet operator/(const Jet& x, const Jet& y) { return x * y.reciprocal(); }
    friend Jet operator/(const Jet& x, double s) { return (1.0 / s) * x; }
    friend Jet operator/(double s, const Jet& y) { return s * y.reciprocal(); }

    Jet& operator+=(const Jet& o) { return *this = *this + o; }
    Jet& operator-=(const Jet& o) { return *this = *this - o; }
    Jet& operator*=(const Jet& o) { return *this = *this * o; }
    Jet& operator/=(const Jet& o) { return *this = *this / o; }

    friend bool operator==(const Jet& x, const Jet& y) {
        return x.ord_ == y.ord_ && x.c_ == y.c_;
    }

    Jet reciprocal() const {
        if (c_[0] == 0.0) throw std::domain_error("Jet: reciprocal of a jet with zero value");
        return compose_power_series([&](int k, double v) {
            double d = 1.0 / v;
            for (int m = 0; m < k; ++m) d *= -1.0 / v;  // (1/v)^{(k)} / k! = (-1)^k v^{-k-1}
            return d;
        });
    }

    // f(jet) for a univariate f given by its scaled derivatives a_k = f^{(k)}(v)/k!.
    template <typename CoeffFn>
    Jet compose_power_series(CoeffFn&& scaled_deriv) const {
        double v = c_[0];
        Jet u = *this;
        u.c_[0] = 0.0;  // the nilpotent part
        Jet acc(scaled_deriv(ord_, v), ord_);
        for (int k = ord_ - 1; k >= 0; --k) acc = acc * u + Jet(scaled_deriv(k, v), ord_);
        return acc;
    }

    bool is_zero() const {
        for (double v : c_)
            if (v != 0.0) return false;
        return true;
    }

    double max_abs_coeff() const {
        double m = 0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    static int check_order(int ord) {
        if (ord < 0 || ord > kJetMaxOrder) throw std::invalid_argument("Jet: order out of range");
        return ord;
    }

    int ord_;
    std::array<double, kJetCoeffs> c_;
};

// ---------------------------------------------------------------------------
// Elementary functions.

inline Jet exp(const Jet& x) {
    return x.compose_power_series([](int k, double v) {
        double a = std::exp(v);
        for (int m = 1; m <= k; ++m) a /= m;
        return a;
    });
}

inline Jet log(const Jet& x) {
    if (x.value() <= 0.0) throw std::domain_error("Jet: log of a nonpositive value");
    return x.compose_power_series([](int k, double v) {
        if (k == 0) return std::log(v);
        double a = (k % 2 == 0 ? -1.0 : 1.0) / k;  // log^{(k)}(v)/k! = (-1)^{k-1}/(k v^k)
        for (int m = 0; m < k; ++m) a /= v;
        return a;
    });
}

namespace jetdet {
// k-th derivative of sin at v: the cycle sin, cos, -sin, -cos.
inline double sin_deriv(int k, double v) {
    switch (k % 4) {
        case 0: return std::sin(v);
        case 1: return std::cos(v);
        case 2: return -std::sin(v);
        default: return -std::cos(v);
    }
}
}  // namespace jetdet

inline Jet sin(const Jet& x) {
    return x.compose_power_series([](int k, double v) {
        double a = jetdet::sin_deriv(k, v);
        for (int m = 1; m <= k; ++m) a /= m;
        return a;
    });
}

inline Jet cos(const Jet& x) {
    return x.compose_power_series([](int k, double v) {
        double a = jetdet::sin_deriv(k + 1, v);
        for (int m = 1; m <= k; ++m) a /= m;
        return a;
    });
}

inline Jet sinh(const Jet& x) {
    return x.compose_power_series([](int k, double v) {
        double a = (k % 2 == 0) ? std::sinh(v) : std::cosh(v);
        for (int m = 1; m <= k; ++m) a /= m;
        return a;
    });
}

inline Jet cosh(const Jet& x) {
    return x.compose_power_series([](int k, double v) {
        double a = (k % 2 == 0) ? std::cosh(v) : std::sinh(v);
        for (int m = 1; m <= k; ++m) a /= m;
        return a;
    });
}

// x^p for a real exponent; requires a positive value unless p is a
// nonnegative integer (where plain powers apply).
inline Jet pow(const Jet& x, double p) {
    double ip;
    if (std::modf(p, &ip) == 0.0 && ip >= 0 && ip <= 16) {
        Jet r(1.0, x.order());
        for (int m = 0; m < static_cast<int>(ip); ++m) r = r * x;
        return r;
    }
    if (x.value() <= 0.0) throw std::domain_error("Jet: pow of a nonpositive value");
    return x.compose_power_series([p](int k, double v) {
        double a = std::pow(v, p - k);
        for (int m = 0; m < k; ++m) a *= (p - m);
        for (int m = 1; m <= k; ++m) a /= m;
        return a;
    });
}

inline Jet sqrt(const Jet& x) {
    if (x.value() <= 0.0) throw std::domain_error("Jet: sqrt of a nonpositive value");
    return pow(x, 0.5);
}

// ---------------------------------------------------------------------------
// "Antiderivative" assembly: build an order-(m+1) jet from its value and its
// five partial-derivative jets (each of order m).  When the supplied
// gradients are the gradients of an actual function the reconstruction is
// exact; minor inconsistencies (from floating-point noise) are averaged out.
inline Jet jet_from_gradient(double value, const std::array<Jet, kJetVars>& grad) {
    const auto& t = jetdet::jet_tables();
    int m = grad[0].order();
    for (const Jet& g : grad) m = std::min(m, g.order());
    int ord = std::min(m + 1, kJetMaxOrder);
    Jet r(value, ord);
    for (int p = 0; p < kJetCoeffs; ++p) {
        if (t.deg[p] == 0 || t.deg[p] > ord) continue;
        double acc = 0;
        int cnt = 0;
        for (int i = 0; i < kJetVars; ++i) {
            if (t.alpha[p][i] == 0) continue;
            std::array<int, kJetVars> a = t.alpha[p];
            a[i] -= 1;
            acc += grad[i].coeff(t.pos_of_code[jetdet::JetTables::code(a)]) / t.alpha[p][i];
            ++cnt;
        }
        r.coeff(p) = acc / cnt;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Scalar traits: lets the generic exterior-algebra containers (Vec, Matrix,
// KForm, Tensor) operate over the jet ring, which is how chart-level forms
// with derivative information are represented.

template <>
struct ScalarTraits<Jet> {
    static Jet zero() { return Jet(0.0); }
    static Jet one() { return Jet(1.0); }
    static Jet from_fraction(long num, long den) {
        return Jet(static_cast<double>(num) / static_cast<double>(den));
    }
    static Jet sqrt2() { return Jet(std::sqrt(2.0)); }
    static bool is_zero(const Jet& x) { return x.is_zero(); }
    static int sign(const Jet& x) { return x.value() == 0.0 ? 0 : (x.value() > 0 ? 1 : -1); }
    static double to_double(const Jet& x) { return x.value(); }
    static Jet sqrt(const Jet& x) { return ae::sqrt(x); }
    static constexpr bool exact = false;
};

}  // namespace ae
