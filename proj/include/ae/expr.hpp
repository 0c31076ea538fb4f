// Plain-text scalar expressions over the five chart coordinates, evaluated in
// jet arithmetic.  Grammar: + - * / ^ with usual precedence (^ binds tightest,
// right-associative, exponent must be a constant subexpression), parentheses,
// decimal and fractional literals, the constant pi, and the functions
// exp, log, sin, cos, sinh, cosh, sqrt.
#pragma once

#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

#include "ae/jet.hpp"

namespace ae {

using JetArgs = std::array<Jet, kJetVars>;
using JetExprFn = std::function<Jet(const JetArgs&)>;

namespace exprdet {

struct Parser {
    const std::string& s;
    size_t i = 0;
    const std::array<std::string, kJetVars>& coords;

    explicit Parser(const std::string& text, const std::array<std::string, kJetVars>& names)
        : s(text), coords(names) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("expression parse error at offset " + std::to_string(i) + ": " +
                                    what + " in '" + s + "'");
    }

    JetExprFn parse() {
        JetExprFn e = sum();
        skip();
        if (i != s.size()) fail("trailing input");
        return e;
    }

    JetExprFn sum() {
        JetExprFn acc = product();
        for (;;) {
            skip();
            if (eat('+')) {
                JetExprFn rhs = product();
                acc = [acc, rhs](const JetArgs& x) { return acc(x) + rhs(x); };
            } else if (eat('-')) {
                JetExprFn rhs = product();
                acc = [acc, rhs](const JetArgs& x) { return acc(x) - rhs(x); };
            } else {
                return acc;
            }
        }
    }

    JetExprFn product() {
        JetExprFn acc = unary();
        for (;;) {
            skip();
            if (eat('*')) {
                JetExprFn rhs = unary();
                acc = [acc, rhs](const JetArgs& x) { return acc(x) * rhs(x); };
            } else if (eat('/')) {
                JetExprFn rhs = unary();
                acc = [acc, rhs](const JetArgs& x) { return acc(x) / rhs(x); };
            } else {
                return acc;
            }
        }
    }

    JetExprFn unary() {
        skip();
        if (eat('-')) {
            JetExprFn e = unary();
            return [e](const JetArgs& x) { return -e(x); };
        }
        if (eat('+')) return unary();
        return power();
    }

    JetExprFn power() {
        JetExprFn base = atom();
        skip();
        if (!eat('^')) return base;
        JetExprFn expo = unary();  // right-associative; unary handles nested ^
        double p = constant_value(expo);
        return [base, p](const JetArgs& x) { return ae::pow(base(x), p); };
    }

    // Exponents must not depend on the coordinates.
    double constant_value(const JetExprFn& e) {
        JetArgs probe;
        for (int v = 0; v < kJetVars; ++v) probe[v] = Jet::variable(v, 0.7 + 0.1 * v);
        Jet val = e(probe);
        Jet c(val.value(), val.order());
        for (int p = 0; p < kJetCoeffs; ++p)
            if (std::abs(val.coeff(p) - c.coeff(p)) > 1e-12) fail("exponent is not constant");
        return val.value();
    }

    JetExprFn atom() {
        skip();
        if (i >= s.size()) fail("unexpected end of input");
        char c = s[i];
        if (c == '(') {
            ++i;
            JetExprFn e = sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected character");
    }

    JetExprFn number() {
        size_t start = i;
        while (i < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.' || s[i] == 'e' ||
                s[i] == 'E' || ((s[i] == '+' || s[i] == '-') && (s[i - 1] == 'e' || s[i - 1] == 'E'))))
            ++i;
        double v;
        try {
            v = std::stod(s.substr(start, i - start));
        } catch (const std::exception&) {
            fail("bad numeric literal");
        }
        return [v](const JetArgs&) { return Jet(v); };
    }

    JetExprFn identifier() {
        size_t start = i;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        std::string name = s.substr(start, i - start);
        for (int v = 0; v < kJetVars; ++v)
            if (name == coords[v]) return [v](const JetArgs& x) { return x[v]; };
        if (name == "pi") {
            double v = 3.14159265358979323846;
            return [v](const JetArgs&) { return Jet(v); };
        }
        skip();
        if (!eat('(')) fail("unknown identifier '" + name + "'");
        JetExprFn arg = sum();
        if (!eat(')')) fail("expected ')' after function argument");
        if (name == "exp") return [arg](const JetArgs& x) { return ae::exp(arg(x)); };
        if (name == "log") return [arg](const JetArgs& x) { return ae::log(arg(x)); };
        if (name == "sin") return [arg](const JetArgs& x) { return ae::sin(arg(x)); };
        if (name == "cos") return [arg](const JetArgs& x) { return ae::cos(arg(x)); };
        if (name == "sinh") return [arg](const JetArgs& x) { return ae::sinh(arg(x)); };
        if (name == "cosh") return [arg](const JetArgs& x) { return ae::cosh(arg(x)); };
        if (name == "sqrt") return [arg](const JetArgs& x) { return ae::sqrt(arg(x)); };
        fail("unknown function '" + name + "'");
    }
};

}  // namespace exprdet

// Parses an expression into a function on seeded coordinate jets.
inline JetExprFn parse_expression(const std::string& text,
                                  const std::array<std::string, kJetVars>& coords) {
    exprdet::Parser p(text, coords);
    return p.parse();
}

}  // namespace ae
