// Exact arithmetic in the real quadratic field Q(sqrt(2)).
//
// ExactScalar represents a + b*sqrt(2) with arbitrary-precision rational
// coefficients.  It is the coefficient domain for all exact fiber algebra in
// this library; ordering is via the real embedding so that causality-type
// decisions (signs of inner products) can be made exactly.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ae {

using Rational = boost::multiprecision::cpp_rational;

class ExactScalar {
public:
    ExactScalar() : a_(0), b_(0) {}
    ExactScalar(long v) : a_(v), b_(0) {}           // NOLINT(google-explicit-constructor)
    ExactScalar(int v) : a_(v), b_(0) {}            // NOLINT(google-explicit-constructor)
    ExactScalar(Rational rat) : a_(std::move(rat)), b_(0) {}  // NOLINT(google-explicit-constructor)
    ExactScalar(Rational rat, Rational sq2) : a_(std::move(rat)), b_(std::move(sq2)) {}

    static ExactScalar sqrt2() { return ExactScalar(Rational(0), Rational(1)); }
    static ExactScalar fraction(long num, long den) { return ExactScalar(Rational(num, den)); }

    const Rational& rat_part() const { return a_; }
    const Rational& sqrt2_part() const { return b_; }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_rational() const { return b_ == 0; }

    ExactScalar conj() const { return ExactScalar(a_, -b_); }

    friend ExactScalar operator+(const ExactScalar& x, const ExactScalar& y) {
        return ExactScalar(x.a_ + y.a_, x.b_ + y.b_);
    }
    friend ExactScalar operator-(const ExactScalar& x, const ExactScalar& y) {
        return ExactScalar(x.a_ - y.a_, x.b_ - y.b_);
    }
    friend ExactScalar operator-(const ExactScalar& x) { return ExactScalar(-x.a_, -x.b_); }
    friend ExactScalar operator*(const ExactScalar& x, const ExactScalar& y) {
        return ExactScalar(x.a_ * y.a_ + 2 * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_);
    }
    friend ExactScalar operator/(const ExactScalar& x, const ExactScalar& y) {
        // 1/(a+b*sqrt2) = (a-b*sqrt2)/(a^2-2b^2); the norm vanishes only at 0.
        Rational n = y.a_ * y.a_ - 2 * y.b_ * y.b_;
        if (n == 0) throw std::domain_error("ExactScalar: division by zero");
        return ExactScalar((x.a_ * y.a_ - 2 * x.b_ * y.b_) / n, (x.b_ * y.a_ - x.a_ * y.b_) / n);
    }
    ExactScalar& operator+=(const ExactScalar& o) { return *this = *this + o; }
    ExactScalar& operator-=(const ExactScalar& o) { return *this = *this - o; }
    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }
    ExactScalar& operator/=(const ExactScalar& o) { return *this = *this / o; }

    friend bool operator==(const ExactScalar& x, const ExactScalar& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const ExactScalar& x, const ExactScalar& y) { return !(x == y); }

    // Sign of the real number a + b*sqrt(2); exact.
    int sign() const {
        int sa = a_ == 0 ? 0 : (a_ > 0 ? 1 : -1);
        int sb = b_ == 0 ? 0 : (b_ > 0 ? 1 : -1);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // Mixed signs: compare a^2 with 2 b^2; the larger magnitude term wins.
        Rational d = a_ * a_ - 2 * b_ * b_;
        if (d == 0) return 0;  // impossible over Q unless both are 0, kept for safety
        return (d > 0) ? sa : sb;
    }

    friend bool operator<(const ExactScalar& x, const ExactScalar& y) { return (x - y).sign() < 0; }
    friend bool operator>(const ExactScalar& x, const ExactScalar& y) { return (x - y).sign() > 0; }
    friend bool operator<=(const ExactScalar& x, const ExactScalar& y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const ExactScalar& x, const ExactScalar& y) { return (x - y).sign() >= 0; }

    double to_double() const {
        return static_cast<double>(a_) + static_cast<double>(b_) * std::sqrt(2.0);
    }

    ExactScalar abs() const { return sign() >= 0 ? *this : -*this; }

    // Text form "p/q+r/s*sqrt2"; whitespace-insensitive.  Accepts natural
    // abbreviations: "3", "-1/2", "sqrt2", "2*sqrt2", "1-sqrt2".
    std::string to_string() const {
        std::ostringstream os;
        os << a_;
        if (b_ != 0) {
            if (b_ > 0) os << "+";
            os << b_ << "*sqrt2";
        }
        return os.str();
    }

    static ExactScalar parse(const std::string& text) {
        auto v = try_parse(text);
        if (!v) throw std::invalid_argument("ExactScalar: cannot parse '" + text + "'");
        return *v;
    }

    static std::optional<ExactScalar> try_parse(const std::string& text) {
        std::string s;
        s.reserve(text.size());
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
        if (s.empty()) return std::nullopt;

        Rational rat = 0, sq2 = 0;
        size_t i = 0;
        while (i < s.size()) {
            int sgn = 1;
            while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
                if (s[i] == '-') sgn = -sgn;
                ++i;
            }
            if (i >= s.size()) return std::nullopt;
            // Optional numeric coefficient (integer or fraction).
            bool have_coeff = false;
            Rational coeff = 1;
            size_t j = i;
            auto scan_int = [&](size_t& k) -> std::optional<Rational> {
                size_t start = k;
                while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
                if (k == start) return std::nullopt;
                return Rational(boost::multiprecision::cpp_int(s.substr(start, k - start)));
            };
            if (auto num = scan_int(j)) {
                coeff = *num;
                have_coeff = true;
                if (j < s.size() && s[j] == '/') {
                    size_t k = j + 1;
                    auto den = scan_int(k);
                    if (!den || *den == 0) return std::nullopt;
                    coeff /= *den;
                    j = k;
                }
                i = j;
            }
            bool have_sqrt2 = false;
            if (i < s.size() && (s[i] == '*' || s[i] == 's')) {
                if (s[i] == '*') ++i;
                if (s.compare(i, 5, "sqrt2") == 0) {
                    have_sqrt2 = true;
                    i += 5;
                } else {
                    return std::nullopt;
                }
            }
            if (!have_coeff && !have_sqrt2) return std::nullopt;
            if (sgn < 0) coeff = -coeff;
            if (have_sqrt2)
                sq2 += coeff;
            else
                rat += coeff;
        }
        return ExactScalar(rat, sq2);
    }

private:
    Rational a_, b_;  // value = a_ + b_*sqrt(2); cpp_rational keeps lowest terms
};

inline std::ostream& operator<<(std::ostream& os, const ExactScalar& x) {
    return os << x.to_string();
}

// ---------------------------------------------------------------------------
// Scalar traits: the exterior-algebra and chart code is generic over the
// coefficient field (ExactScalar for zero-remainder identity work, double for
// chart-level numerics).

template <typename T>
struct ScalarTraits;

namespace detail {

// Exact square root of a nonnegative rational, if it is a perfect square.
inline std::optional<Rational> rational_sqrt(const Rational& x) {
    using boost::multiprecision::cpp_int;
    if (x < 0) return std::nullopt;
    if (x == 0) return Rational(0);
    cpp_int num = boost::multiprecision::numerator(x);
    cpp_int den = boost::multiprecision::denominator(x);
    cpp_int rn = boost::multiprecision::sqrt(num);
    cpp_int rd = boost::multiprecision::sqrt(den);
    if (rn * rn != num || rd * rd != den) return std::nullopt;
    return Rational(rn, rd);
}

}  // namespace detail

// Exact square root within Q(sqrt2) of a nonnegative element, if one exists.
// For x = a + b*sqrt2 a root p + q*sqrt2 satisfies p^2 + 2q^2 = a and
// 2pq = b, which reduces to p^2 = (a ± sqrt(a^2 - 2b^2))/2 over Q.
inline std::optional<ExactScalar> exact_sqrt(const ExactScalar& x) {
    if (x.sign() < 0) return std::nullopt;
    if (x.is_zero()) return ExactScalar(0);
    const Rational& a = x.rat_part();
    const Rational& b = x.sqrt2_part();
    if (b == 0) {
        // either sqrt(a) rational or sqrt(a) = q*sqrt2 with 2q^2 = a
        if (auto r = detail::rational_sqrt(a)) return ExactScalar(*r);
        if (auto q = detail::rational_sqrt(a / 2)) return ExactScalar(Rational(0), *q);
        return std::nullopt;
    }
    auto disc = detail::rational_sqrt(a * a - 2 * b * b);
    if (!disc) return std::nullopt;
    for (int sgn : {1, -1}) {
        Rational p2 = (a + (sgn > 0 ? *disc : -*disc)) / 2;
        if (p2 <= 0) continue;
        auto p = detail::rational_sqrt(p2);
        if (!p || *p == 0) continue;
        Rational q = b / (2 * *p);
        ExactScalar cand(*p, q);
        if (cand * cand == x) return cand.sign() >= 0 ? cand : -cand;
        cand = ExactScalar(-*p, -q);
        if (cand * cand == x && cand.sign() >= 0) return cand;
    }
    return std::nullopt;
}

template <>
struct ScalarTraits<ExactScalar> {
    static ExactScalar zero() { return ExactScalar(); }
    static ExactScalar one() { return ExactScalar(1); }
    static ExactScalar from_fraction(long num, long den) { return ExactScalar(Rational(num, den)); }
    static ExactScalar sqrt2() { return ExactScalar::sqrt2(); }
    static bool is_zero(const ExactScalar& x) { return x.is_zero(); }
    static int sign(const ExactScalar& x) { return x.sign(); }
    static double to_double(const ExactScalar& x) { return x.to_double(); }
    static ExactScalar sqrt(const ExactScalar& x) {
        auto r = exact_sqrt(x);
        if (!r) throw std::domain_error("square root not representable in Q(sqrt2): " + x.to_string());
        return *r;
    }
    static constexpr bool exact = true;
};

template <>
struct ScalarTraits<double> {
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_fraction(long num, long den) {
        return static_cast<double>(num) / static_cast<double>(den);
    }
    static double sqrt2() { return std::sqrt(2.0); }
    static bool is_zero(double x) { return x == 0.0; }
    static int sign(double x) { return x == 0.0 ? 0 : (x > 0 ? 1 : -1); }
    static double to_double(double x) { return x; }
    static double sqrt(double x) { return std::sqrt(x); }
    static constexpr bool exact = false;
};

}  // namespace ae
