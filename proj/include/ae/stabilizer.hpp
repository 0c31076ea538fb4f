// Everything determined by a fixed nonzero tractor S: the endomorphism K, the
// stabilized 3-forms, the one-parameter family of compatible G2-structures
// with its three parameterizations, epsilon-complex volume forms, the
// scale-recovery algorithm, and the flat-model ray classifier.
#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ae/g2.hpp"

namespace ae {

// --------------------------------------------------------------------------
// Stabilizer data

template <typename T>
struct StabilizerData {
    Vec<T> S;                      // the fixed tractor, pre-normalized
    int eps = 0;                   // -H(S,S), in {-1, 0, +1}
    Matrix<T> K;                   // K^A_B = -S^C Phi_C^A_B
    KForm<T> phi_I, phi_J, phi_K;  // the stabilized 3-forms
    std::vector<Vec<T>> W_basis;   // basis of W = S-perp (6 vectors)

    StabilizerData() : S(7), K(7, 7), phi_I(7, 3), phi_J(7, 3), phi_K(7, 3) {}
};

template <typename T>
StabilizerData<T> make_stabilizer(const G2Structure<T>& g, const Vec<T>& S) {
    using ST = ScalarTraits<T>;
    if (S.is_zero()) throw std::invalid_argument("stabilizer tractor S must be nonzero");
    T hss = g.inner(S, S);
    T minus_one = ST::zero() - ST::one();
    int eps;
    double h = ST::to_double(hss);
    const double ntol = 1e-9;
    if (ST::exact ? ST::is_zero(hss) : std::abs(h) <= ntol)
        eps = 0;
    else if (ST::exact ? hss == ST::one() : std::abs(h - 1.0) <= ntol)
        eps = -1;
    else if (ST::exact ? hss == minus_one : std::abs(h + 1.0) <= ntol)
        eps = +1;
    else
        throw std::invalid_argument(
            "stabilizer tractor S is not normalized: H(S,S) must lie in {-1,0,+1} "
            "(rescale S by 1/sqrt(|H(S,S)|) first)");

    StabilizerData<T> d;
    d.S = S;
    d.eps = eps;

    // K^A_B = -S^C Phi_C^A_B = -H^{AD} (S . Phi)_{DB}
    KForm<T> sphi = hook(S, g.phi);
    for (int A = 0; A < 7; ++A)
        for (int B = 0; B < 7; ++B) {
            T acc = ST::zero();
            for (int D = 0; D < 7; ++D) {
                const T& c = sphi.component({D, B});
                if (!ST::is_zero(c)) acc += g.hinv(A, D) * c;
            }
            d.K(A, B) = ST::zero() - acc;
        }

    KForm<T> sflat = lower_vector(g.h, S);
    d.phi_I = hook(S, wedge(sflat, g.phi));
    d.phi_J = hook(S, g.star_phi);
    d.phi_K = wedge(sflat, hook(S, g.phi));

    // W = S-perp: nullspace of the 1x7 row S-flat
    Matrix<T> row(1, 7);
    for (int i = 0; i < 7; ++i) row(0, i) = sflat.component({i});
    d.W_basis = nullspace(row);
    if (d.W_basis.size() != 6) throw std::logic_error("S-perp is not 6-dimensional");
    return d;
}

// dim{A in the annihilator algebra of Phi : A(S) = 0}; equals 8 for any
// nonzero S of normalized causality type.
template <typename T>
int stabilizer_annihilator_dim(const G2Structure<T>& g, const Vec<T>& S) {
    auto basis = g2_algebra_basis(g);
    Matrix<T> m(7, static_cast<int>(basis.size()));
    for (size_t c = 0; c < basis.size(); ++c) {
        Vec<T> img = basis[c] * S;
        for (int r = 0; r < 7; ++r) m(r, static_cast<int>(c)) = img[r];
    }
    return static_cast<int>(basis.size()) - matrix_rank(m);
}

// Dimensions of the filtration V > W > im K > ker K > <S> > 0 (isotropic S).
template <typename T>
std::vector<int> filtration_dims(const StabilizerData<T>& d) {
    int rk = matrix_rank(d.K);
    return {7, static_cast<int>(d.W_basis.size()), rk, 7 - rk, 1, 0};
}

// --------------------------------------------------------------------------
// The family of compatible G2-structures

template <typename T>
struct FamilyParam {
    enum class Kind { Raw, Circle, Hyperbolic, Parabolic };
    Kind kind = Kind::Raw;
    T a{};           // Raw: Abar; Circle: cos value; Hyperbolic: cosh value (> 0)
    T b{};           // Raw: B; Circle: sin value; Hyperbolic: sinh value; Parabolic: s
    int branch = 0;  // Hyperbolic only: -1 or +1 (the superscript sign)

    static FamilyParam raw(T abar, T bb) { return {Kind::Raw, std::move(abar), std::move(bb), 0}; }
    static FamilyParam circle(T c, T s) { return {Kind::Circle, std::move(c), std::move(s), 0}; }
    static FamilyParam hyperbolic(int branch, T c, T s) {
        return {Kind::Hyperbolic, std::move(c), std::move(s), branch};
    }
    static FamilyParam parabolic(T s) { return {Kind::Parabolic, ScalarTraits<T>::zero(), std::move(s), 0}; }
};

// Phi' for a family parameter.  Raw gives Phi + Abar Phi_I + B Phi_J subject
// to -eps Abar^2 + 2 Abar + B^2 = 0; the closed-form parameterizations are
//   circle      (eps = -1):  cos u Phi_I + sin u Phi_J + Phi_K
//   hyperbolic  (eps = +1):  (branch cosh t) Phi_I + sinh t Phi_J - Phi_K
//   parabolic   (eps =  0):  Phi - (s^2/2) Phi_I + s Phi_J
template <typename T>
KForm<T> family_member(const StabilizerData<T>& d, const G2Structure<T>& g, const FamilyParam<T>& p,
                       double tol = 0.0) {
    using ST = ScalarTraits<T>;
    using Kind = typename FamilyParam<T>::Kind;
    T eps = ST::from_fraction(d.eps, 1);
    auto require = [&](const T& residual, const char* what) {
        if (ST::exact ? !ST::is_zero(residual) : std::abs(ST::to_double(residual)) > tol)
            throw std::invalid_argument(std::string("family parameter constraint violated: ") + what);
    };
    switch (p.kind) {
        case Kind::Raw: {
            require(ST::zero() - eps * p.a * p.a + p.a + p.a + p.b * p.b, "-eps A^2 + 2A + B^2 = 0");
            return g.phi + p.a * d.phi_I + p.b * d.phi_J;
        }
        case Kind::Circle: {
            if (d.eps != -1) throw std::invalid_argument("circle parameterization requires eps = -1");
            require(p.a * p.a + p.b * p.b - ST::one(), "cos^2 + sin^2 = 1");
            return p.a * d.phi_I + p.b * d.phi_J + d.phi_K;
        }
        case Kind::Hyperbolic: {
            if (d.eps != +1) throw std::invalid_argument("hyperbolic parameterization requires eps = +1");
            if (p.branch != -1 && p.branch != 1)
                throw std::invalid_argument("hyperbolic branch must be -1 or +1");
            if (ST::sign(p.a) <= 0) throw std::invalid_argument("cosh value must be positive");
            require(p.a * p.a - p.b * p.b - ST::one(), "cosh^2 - sinh^2 = 1");
            T coeff = ST::from_fraction(p.branch, 1) * p.a;
            return coeff * d.phi_I + p.b * d.phi_J - d.phi_K;
        }
        case Kind::Parabolic: {
            if (d.eps != 0) throw std::invalid_argument("parabolic parameterization requires eps = 0");
            T half = ST::from_fraction(1, 2);
            return g.phi - half * p.b * p.b * d.phi_I + p.b * d.phi_J;
        }
    }
    throw std::logic_error("unreachable family kind");
}

// Analytic derivative of the closed-form parameterization at parameter 0;
// equals Phi_J for every variant.
template <typename T>
KForm<T> derivative_at_zero(const StabilizerData<T>& d, const G2Structure<T>&,
                            typename FamilyParam<T>::Kind kind) {
    using ST = ScalarTraits<T>;
    using Kind = typename FamilyParam<T>::Kind;
    switch (kind) {
        case Kind::Circle:
            // d/du (cos u Phi_I + sin u Phi_J + Phi_K) at 0 = -sin(0) Phi_I + cos(0) Phi_J
            return ST::zero() * d.phi_I + ST::one() * d.phi_J;
        case Kind::Hyperbolic:
            // d/dt (branch cosh t Phi_I + sinh t Phi_J - Phi_K) at 0
            //   = branch sinh(0) Phi_I + cosh(0) Phi_J
            return ST::zero() * d.phi_I + ST::one() * d.phi_J;
        case Kind::Parabolic:
            // d/ds (Phi - s^2/2 Phi_I + s Phi_J) at 0 = -0 Phi_I + Phi_J
            return ST::zero() * d.phi_I + ST::one() * d.phi_J;
        case Kind::Raw:
            break;
    }
    throw std::invalid_argument("derivative_at_zero needs a closed-form parameterization");
}

// --------------------------------------------------------------------------
// Restriction of forms to W and the epsilon-complex volume forms

// Pull a k-form on the 7-dimensional fiber back along the inclusion spanned
// by the given basis vectors; the result is a k-form in dimension
// basis.size() with components f(w_{i_1}, ..., w_{i_k}).
template <typename T>
KForm<T> restrict_form(const KForm<T>& f, const std::vector<Vec<T>>& basis) {
    using ST = ScalarTraits<T>;
    int m = static_cast<int>(basis.size());
    KForm<T> out(m, f.degree);
    if (f.degree == 0) {
        out.comp = f.comp;
        return out;
    }
    for (size_t r = 0; r < out.comp.size(); ++r) {
        std::vector<int> sel = subset_unrank(m, f.degree, static_cast<long>(r));
        // evaluate f on (basis[sel[0]], ..., basis[sel[k-1]]): sum over
        // increasing multi-indices I of f_I * det(coordinate minor)
        T acc = ST::zero();
        long total = binomial(f.n, f.degree);
        for (long ri = 0; ri < total; ++ri) {
            const T& fi = f.comp[ri];
            if (ST::is_zero(fi)) continue;
            std::vector<int> subset = subset_unrank(f.n, f.degree, ri);
            // det of the k x k matrix M[a][b] = basis[sel[b]][subset[a]]
            Matrix<T> mm(f.degree, f.degree);
            for (int a = 0; a < f.degree; ++a)
                for (int b = 0; b < f.degree; ++b) mm(a, b) = basis[sel[b]][subset[a]];
            // small determinant by cofactor expansion
            T det = ST::zero();
            if (f.degree == 1)
                det = mm(0, 0);
            else if (f.degree == 2)
                det = mm(0, 0) * mm(1, 1) - mm(0, 1) * mm(1, 0);
            else if (f.degree == 3)
                det = mm(0, 0) * (mm(1, 1) * mm(2, 2) - mm(1, 2) * mm(2, 1)) -
                      mm(0, 1) * (mm(1, 0) * mm(2, 2) - mm(1, 2) * mm(2, 0)) +
                      mm(0, 2) * (mm(1, 0) * mm(2, 1) - mm(1, 1) * mm(2, 0));
            else
                throw std::invalid_argument("restrict_form supports degree <= 3");
            acc += fi * det;
        }
        out.comp[r] = acc;
    }
    return out;
}

template <typename T>
struct EpsVolumeForm {
    KForm<T> re, im;  // 3-forms on W, expressed in W_basis coordinates
    int eps = 0;

    EpsVolumeForm() : re(6, 3), im(6, 3) {}
};

// The lowered 2-form of K, restricted to W coordinates.
template <typename T>
KForm<T> k_two_form_on_w(const StabilizerData<T>& d, const G2Structure<T>& g) {
    Tensor<T> t(7, 2);
    using ST = ScalarTraits<T>;
    for (int A = 0; A < 7; ++A)
        for (int B = 0; B < 7; ++B) {
            T acc = ST::zero();
            for (int C = 0; C < 7; ++C) acc += g.h(A, C) * d.K(C, B);
            t.at({A, B}) = acc;
        }
    return restrict_form(antisymmetrize(t), d.W_basis);
}

// Psi_{(A,B)} = [A Phi_I + eps B Phi_J] + i_eps [B Phi_I + A Phi_J] on W,
// and the reconstructed 3-form Re Psi + eps S-flat ^ K-tilde on V.
template <typename T>
std::pair<EpsVolumeForm<T>, KForm<T>> epsilon_volume_and_reconstruct(const StabilizerData<T>& d,
                                                                     const G2Structure<T>&,
                                                                     const T& A, const T& B,
                                                                     double tol = 0.0) {
    using ST = ScalarTraits<T>;
    if (d.eps == 0) throw std::invalid_argument("epsilon volume forms require eps in {-1,+1}");
    T eps = ST::from_fraction(d.eps, 1);
    T residual = A * A - eps * B * B - ST::one();
    if (ST::exact ? !ST::is_zero(residual) : std::abs(ST::to_double(residual)) > tol)
        throw std::invalid_argument("epsilon volume form constraint A^2 - eps B^2 = 1 violated");

    KForm<T> re7 = A * d.phi_I + eps * B * d.phi_J;
    KForm<T> im7 = B * d.phi_I + A * d.phi_J;

    EpsVolumeForm<T> psi;
    psi.eps = d.eps;
    psi.re = restrict_form(re7, d.W_basis);
    psi.im = restrict_form(im7, d.W_basis);

    // Re Psi + eps S-flat ^ K-tilde, assembled on the 7-dimensional fiber.
    // The lowered 2-form of K is -(S . Phi), so S-flat ^ K-tilde = -Phi_K.
    KForm<T> phi_rec = re7 - eps * d.phi_K;
    return {psi, phi_rec};
}

// Residuals of the normalization Psi ^ bar-Psi = -(4/3) i_eps K^K^K as the
// two real 6-form component equations on W:
//   first:  Re^Re - eps Im^Im            (must vanish)
//   second: 2 Im^Re + (4/3) K^K^K        (must vanish)
template <typename T>
std::pair<KForm<T>, KForm<T>> eps_volume_normalization_residuals(const StabilizerData<T>& d,
                                                                 const G2Structure<T>& g,
                                                                 const EpsVolumeForm<T>& psi) {
    using ST = ScalarTraits<T>;
    T eps = ST::from_fraction(psi.eps, 1);
    KForm<T> kw = k_two_form_on_w(d, g);
    KForm<T> first = wedge(psi.re, psi.re) - eps * wedge(psi.im, psi.im);
    KForm<T> second =
        ST::from_fraction(2, 1) * wedge(psi.im, psi.re) + ST::from_fraction(4, 3) * wedge(wedge(kw, kw), kw);
    return {first, second};
}

// --------------------------------------------------------------------------
// Antipodal test

template <typename T>
bool antipodal_test(const G2Structure<T>&, const KForm<T>& a, const KForm<T>& b, double tol = 0.0) {
    using ST = ScalarTraits<T>;
    KForm<T> diff = a - b;
    bool distinct;
    if (ST::exact) {
        distinct = !diff.is_zero();
    } else {
        double scale = 0;
        for (const auto& c : a.comp) scale = std::max(scale, std::abs(ST::to_double(c)));
        distinct = false;
        for (const auto& c : diff.comp)
            if (std::abs(ST::to_double(c)) > tol * std::max(1.0, scale)) distinct = true;
    }
    if (!distinct) return false;
    KForm<T> w = wedge(a, b);
    if (ST::exact) return w.is_zero();
    for (const auto& c : w.comp)
        if (std::abs(ST::to_double(c)) > tol) return false;
    return true;
}

// --------------------------------------------------------------------------
// Recovery of the scale from a compatible G2-structure

template <typename T>
struct RecoveryResult {
    enum class Status { Ok, Identical, NotInFamily };
    Status status = Status::NotInFamily;
    int eps = 0;
    Vec<T> S;
    std::string branch;  // which case of the algorithm fired
    FamilyParam<T> param;

    RecoveryResult() : S(7) {}
};

namespace detail {

// Solve target = sum_j x_j cols_j exactly (or to tolerance); nullopt if
// inconsistent.
template <typename T>
std::optional<std::vector<T>> solve_in_span(const std::vector<KForm<T>>& cols, const KForm<T>& target,
                                            double tol) {
    using ST = ScalarTraits<T>;
    int rows = static_cast<int>(target.comp.size());
    int n = static_cast<int>(cols.size());
    Matrix<T> m(rows, n + 1);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = cols[c].comp[r];
    for (int r = 0; r < rows; ++r) m(r, n) = target.comp[r];

    std::vector<int> pivot_of_col(n, -1);
    int row = 0;
    for (int c = 0; c < n && row < rows; ++c) {
        int pr = -1;
        if (ST::exact) {
            for (int r = row; r < rows; ++r)
                if (!ST::is_zero(m(r, c))) {
                    pr = r;
                    break;
                }
        } else {
            double best = 0;
            for (int r = row; r < rows; ++r) {
                double v = std::abs(ST::to_double(m(r, c)));
                if (v > best) {
                    best = v;
                    pr = r;
                }
            }
            if (best <= tol) pr = -1;
        }
        if (pr < 0) continue;
        for (int cc = 0; cc <= n; ++cc) std::swap(m(row, cc), m(pr, cc));
        T inv = ST::one() / m(row, c);
        for (int cc = 0; cc <= n; ++cc) m(row, cc) = m(row, cc) * inv;
        for (int r = 0; r < rows; ++r) {
            if (r == row || ST::is_zero(m(r, c))) continue;
            T f = m(r, c);
            for (int cc = 0; cc <= n; ++cc) m(r, cc) = m(r, cc) - f * m(row, cc);
        }
        pivot_of_col[c] = row;
        ++row;
    }
    std::vector<T> x(n, ST::zero());
    for (int c = 0; c < n; ++c)
        if (pivot_of_col[c] >= 0) x[c] = m(pivot_of_col[c], n);
    // consistency: residual rows beyond the pivots must vanish
    for (int r = row; r < rows; ++r) {
        if (ST::exact ? !ST::is_zero(m(r, n)) : std::abs(ST::to_double(m(r, n))) > tol)
            return std::nullopt;
    }
    return x;
}

}  // namespace detail

template <typename T>
RecoveryResult<T> recover_scale(const G2Structure<T>& g, const KForm<T>& phi_prime, double tol = 0.0) {
    using ST = ScalarTraits<T>;
    RecoveryResult<T> out;

    auto norm_small = [&](const T& v, double scale) {
        return ST::exact ? ST::is_zero(v) : std::abs(ST::to_double(v)) <= tol * std::max(1.0, scale);
    };

    KForm<T> diff = phi_prime - g.phi;
    bool identical = true;
    for (const auto& c : diff.comp)
        if (!norm_small(c, 1.0)) identical = false;
    if (identical) {
        out.status = RecoveryResult<T>::Status::Identical;
        out.branch = "identical-structure";
        return out;
    }

    Vec<T> t7 = pi37(g, phi_prime);
    T q = g.inner(t7, t7);
    double tnorm2 = 0;
    for (int i = 0; i < 7; ++i) {
        double v = ST::to_double(t7[i]);
        tnorm2 += v * v;
    }
    int qsign;
    if (ST::exact)
        qsign = ST::sign(q);
    else
        qsign = (std::abs(ST::to_double(q)) <= 1e-9 * std::max(tnorm2, 1e-300)) ? 0
                : (ST::to_double(q) > 0 ? 1 : -1);
    bool t_nonzero = ST::exact ? !t7.is_zero() : std::sqrt(tnorm2) > 1e-6;

    auto finish = [&](const StabilizerData<T>& sd, const FamilyParam<T>& p,
                      const char* branch) -> RecoveryResult<T> {
        KForm<T> regen = family_member(sd, g, p, tol);
        KForm<T> r = regen - phi_prime;
        for (const auto& c : r.comp) {
            if (!norm_small(c, 1.0)) {
                out.status = RecoveryResult<T>::Status::NotInFamily;
                out.branch = std::string(branch) + ":residual-nonzero";
                return out;
            }
        }
        out.status = RecoveryResult<T>::Status::Ok;
        out.eps = sd.eps;
        out.S = sd.S;
        out.branch = branch;
        out.param = p;
        return out;
    };

    if (qsign < 0) {
        // eps = +1: s = sqrt(-H(T,T)), S = T / s
        try {
        T s = ST::sqrt(ST::zero() - q);
        T inv = ST::one() / s;
        Vec<T> S(7);
        for (int i = 0; i < 7; ++i) S.comp[i] = inv * t7[i];
        auto sd = make_stabilizer(g, S);
        auto coeffs = detail::solve_in_span<T>({sd.phi_I, sd.phi_J, sd.phi_K}, phi_prime, tol);
        if (!coeffs) {
            out.branch = "timelike-T:not-in-span";
            return out;
        }
        const T& a = (*coeffs)[0];
        int branch = ST::sign(a);
        T c = branch < 0 ? ST::zero() - a : a;
        return finish(sd, FamilyParam<T>::hyperbolic(branch, c, (*coeffs)[1]), "timelike-T");
        } catch (const std::domain_error&) {
            out.branch = "timelike-T:sqrt-failure";
            return out;
        } catch (const std::invalid_argument&) {
            out.branch = "timelike-T:constraint-failure";
            return out;
        }
    }

    if (qsign > 0) {
        // eps = -1: s = -sqrt(H(T,T)), S = T / s
        try {
        T s = ST::zero() - ST::sqrt(q);
        T inv = ST::one() / s;
        Vec<T> S(7);
        for (int i = 0; i < 7; ++i) S.comp[i] = inv * t7[i];
        auto sd = make_stabilizer(g, S);
        auto coeffs = detail::solve_in_span<T>({sd.phi_I, sd.phi_J, sd.phi_K}, phi_prime, tol);
        if (!coeffs) {
            out.branch = "spacelike-T:not-in-span";
            return out;
        }
        return finish(sd, FamilyParam<T>::circle((*coeffs)[0], (*coeffs)[1]), "spacelike-T");
        } catch (const std::domain_error&) {
            out.branch = "spacelike-T:sqrt-failure";
            return out;
        } catch (const std::invalid_argument&) {
            out.branch = "spacelike-T:constraint-failure";
            return out;
        }
    }

    if (t_nonzero) {
        // eps = 0.  Any nonzero multiple of T generates the same line; solve
        // with the candidate S0 = T, then rescale so the parabolic parameter
        // is s = 1 (which pins the scale: S depends quadratically on phi_I
        // and linearly on phi_J).
        auto sd0 = make_stabilizer(g, t7);
        auto coeffs = detail::solve_in_span<T>({g.phi, sd0.phi_I, sd0.phi_J}, phi_prime, tol);
        if (!coeffs || !norm_small((*coeffs)[0] - ST::one(), 1.0)) {
            out.branch = "isotropic-T:not-in-span";
            return out;
        }
        const T& b = (*coeffs)[2];
        if (norm_small(b, 1.0)) {
            out.branch = "isotropic-T:degenerate";
            return out;
        }
        Vec<T> S(7);
        for (int i = 0; i < 7; ++i) S.comp[i] = b * t7[i];
        auto sd = make_stabilizer(g, S);
        return finish(sd, FamilyParam<T>::parabolic(ST::one()), "isotropic-T");
    }

    // T = 0: antipodal branch.  pi327(Phi') + (1/7) H = sign * Sflat x Sflat.
    Matrix<T> m = pi327(g, phi_prime);
    T seventh = ST::from_fraction(1, 7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) m(i, j) = m(i, j) + seventh * g.h(i, j);
    int a0 = -1;
    double best = -1;
    for (int i = 0; i < 7; ++i) {
        double v = std::abs(ST::to_double(m(i, i)));
        if (v > best) {
            best = v;
            a0 = i;
        }
    }
    if (a0 < 0 || norm_small(m(a0, a0), 1.0)) {
        out.branch = "antipodal:rank-failure";
        return out;
    }
    int sign = ST::exact ? ST::sign(m(a0, a0)) : (ST::to_double(m(a0, a0)) > 0 ? 1 : -1);
    try {
        T diag = sign < 0 ? ST::zero() - m(a0, a0) : m(a0, a0);
        T s0 = ST::sqrt(diag);
        KForm<T> sflat(7, 1);
        T inv = ST::one() / s0;
        T sgn = ST::from_fraction(sign, 1);
        // m(a0,b) = sign * S_{a0} S_b with s0 = |S_{a0}|, so sgn * m(a0,b) / s0
        // recovers S-flat up to the overall sign ambiguity of S.
        for (int b = 0; b < 7; ++b) sflat.comp[b] = sgn * inv * m(a0, b);
        // verify the rank-one structure m = sign * Sflat (x) Sflat
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) {
                T r = m(i, j) - sgn * sflat.comp[i] * sflat.comp[j];
                if (!norm_small(r, best)) {
                    out.branch = "antipodal:not-rank-one";
                    return out;
                }
            }
        Vec<T> S = raise_covector(g.hinv, sflat);
        auto sd = make_stabilizer(g, S);
        if ((sign > 0 && sd.eps != -1) || (sign < 0 && sd.eps != +1)) {
            out.branch = "antipodal:causality-mismatch";
            return out;
        }
        if (sign > 0) {
            // eps = -1, phi' = phi_pi = -Phi_I + Phi_K
            return finish(sd, FamilyParam<T>::circle(ST::zero() - ST::one(), ST::zero()),
                          "antipodal-plus");
        }
        // eps = +1, phi' = phi_0^+ = +Phi_I - Phi_K
        return finish(sd, FamilyParam<T>::hyperbolic(+1, ST::one(), ST::zero()), "antipodal-minus");
    } catch (const std::domain_error&) {
        out.branch = "antipodal:sqrt-failure";
        return out;
    } catch (const std::invalid_argument&) {
        out.branch = "antipodal:constraint-failure";
        return out;
    }
}

// --------------------------------------------------------------------------
// Flat-model ray classifier

enum class OrbitLabel { M5p, M5m, M4, M2p, M2m, M2, M0p, M0m };

inline std::string to_string(OrbitLabel l) {
    switch (l) {
        case OrbitLabel::M5p: return "M5+";
        case OrbitLabel::M5m: return "M5-";
        case OrbitLabel::M4: return "M4";
        case OrbitLabel::M2p: return "M2+";
        case OrbitLabel::M2m: return "M2-";
        case OrbitLabel::M2: return "M2";
        case OrbitLabel::M0p: return "M0+";
        case OrbitLabel::M0m: return "M0-";
    }
    return "?";
}

// Tractor-side conditions, evaluated in order: sign H(X,S) => M5+-;
// H(X,S)=0 and X x S independent of X => M4; X x S = +-X => M2+-;
// X x S = 0 and X independent of S => M2; S on the ray of +-X => M0+-.
template <typename T>
OrbitLabel classify_ray(const G2Structure<T>& g, const StabilizerData<T>& d, const Vec<T>& X,
                        double tol = 0.0) {
    using ST = ScalarTraits<T>;
    auto is_small = [&](const T& v) {
        return ST::exact ? ST::is_zero(v) : std::abs(ST::to_double(v)) <= tol;
    };
    if (X.is_zero()) throw std::invalid_argument("ray vector X must be nonzero");
    if (!is_small(g.inner(X, X))) throw std::invalid_argument("X must be isotropic: H(X,X) = 0");

    T hxs = g.inner(X, d.S);
    if (!is_small(hxs)) return ST::sign(hxs) > 0 ? OrbitLabel::M5p : OrbitLabel::M5m;

    Vec<T> xs = g.cross(X, d.S);
    // linear independence of xs and X via 2x2 minors
    auto independent = [&](const Vec<T>& u, const Vec<T>& v) {
        for (int i = 0; i < 7; ++i)
            for (int j = i + 1; j < 7; ++j)
                if (!is_small(u[i] * v[j] - u[j] * v[i])) return true;
        return false;
    };
    bool xs_zero = true;
    for (int i = 0; i < 7; ++i)
        if (!is_small(xs[i])) xs_zero = false;

    if (!xs_zero && independent(xs, X)) return OrbitLabel::M4;

    if (!xs_zero) {
        // xs = c X; c must be +-1 (K^2 acts as eps on S-orthogonal isotropics)
        Vec<T> plus = xs - X;
        Vec<T> minus = xs + X;
        bool is_plus = true, is_minus = true;
        for (int i = 0; i < 7; ++i) {
            if (!is_small(plus[i])) is_plus = false;
            if (!is_small(minus[i])) is_minus = false;
        }
        if (is_plus) return OrbitLabel::M2p;
        if (is_minus) return OrbitLabel::M2m;
        throw std::logic_error("classifier internal error: X x S proportional to X with factor != +-1");
    }

    if (independent(X, d.S)) return OrbitLabel::M2;

    // S = c X; the sign of c distinguishes the two point orbits
    int i0 = 0;
    while (i0 < 7 && is_small(X[i0])) ++i0;
    if (i0 == 7 || is_small(d.S[i0])) throw std::logic_error("classifier internal error: degenerate ray");
    T c = d.S[i0] / X[i0];
    return ST::sign(c) > 0 ? OrbitLabel::M0p : OrbitLabel::M0m;
}

// Label sets allowed per eps (the flat-model orbit inventory).
inline std::vector<OrbitLabel> allowed_labels(int eps) {
    switch (eps) {
        case -1: return {OrbitLabel::M5p, OrbitLabel::M5m, OrbitLabel::M4};
        case 0:
            return {OrbitLabel::M5p, OrbitLabel::M5m, OrbitLabel::M4, OrbitLabel::M2, OrbitLabel::M0p,
                    OrbitLabel::M0m};
        case +1:
            return {OrbitLabel::M5p, OrbitLabel::M5m, OrbitLabel::M4, OrbitLabel::M2p, OrbitLabel::M2m};
    }
    throw std::invalid_argument("eps must be in {-1,0,+1}");
}

// --------------------------------------------------------------------------
// Stratified sampling of the isotropic cone

// Chord construction: X = P + t V with P a fixed rational point of the
// quadric and t = -2 H(P,V) / H(V,V), so X is again isotropic.
template <typename T, typename Rng>
std::optional<Vec<T>> isotropic_chord(const G2Structure<T>& g, const Vec<T>& p, Rng& rng) {
    using ST = ScalarTraits<T>;
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 4);
    Vec<T> v(7);
    for (int i = 0; i < 7; ++i) v.comp[i] = ST::from_fraction(num(rng), den(rng));
    T hvv = g.inner(v, v);
    Vec<T> x(7);
    if (ST::is_zero(hvv)) {
        x = v;
    } else {
        T t = (ST::zero() - ST::from_fraction(2, 1) * g.inner(p, v)) / hvv;
        x = p + t * v;
    }
    if (x.is_zero()) return std::nullopt;
    if (!ST::is_zero(g.inner(x, x))) return std::nullopt;
    return x;
}

// A stratified sample of isotropic rays covering the generic strata and the
// special loci (S-orthogonal cone, eigenrays, kernel rays, the ray of +-S)
// appropriate for the causality type of S.
template <typename T>
std::vector<Vec<T>> sample_isotropic_rays(const G2Structure<T>& g, const StabilizerData<T>& d, int n,
                                          unsigned long seed) {
    using ST = ScalarTraits<T>;
    std::mt19937_64 rng(seed);
    std::vector<Vec<T>> out;
    out.reserve(static_cast<size_t>(n));

    // a rational quadric point orthogonal to all the shipped representatives
    Vec<T> p0 = Vec<T>::basis(7, 1);

    // chord through a point of the S-orthogonal cone: project the chord into
    // W by subtracting the S-component, then re-close on the quadric by a
    // second chord step inside W.
    auto w_cone_sample = [&]() -> std::optional<Vec<T>> {
        // random isotropic X, projected to W, then corrected along p0 (p0 is
        // assumed to lie in W and on the cone)
        std::uniform_int_distribution<long> num(-9, 9);
        std::uniform_int_distribution<long> den(1, 4);
        Vec<T> w(7);
        // random vector in W
        for (int i = 0; i < 7; ++i) w.comp[i] = ST::zero();
        for (const auto& b : d.W_basis) {
            T c = ST::from_fraction(num(rng), den(rng));
            w = w + c * b;
        }
        T hww = g.inner(w, w);
        Vec<T> x(7);
        if (ST::is_zero(hww)) {
            x = w;
        } else {
            T hp0w = g.inner(p0, w);
            if (ST::is_zero(hp0w)) return std::nullopt;
            // X = w + t p0 with H(X,X) = hww + 2 t H(p0,w) = 0
            T t = (ST::zero() - hww) / (ST::from_fraction(2, 1) * hp0w);
            x = w + t * p0;
        }
        if (x.is_zero()) return std::nullopt;
        if (!ST::is_zero(g.inner(x, x))) return std::nullopt;
        return x;
    };

    bool p0_in_w = ST::is_zero(g.inner(p0, d.S));

    int want_special = n / 5;
    while (static_cast<int>(out.size()) < n) {
        int stratum = static_cast<int>(out.size()) % 5;
        std::optional<Vec<T>> x;
        if (stratum == 4 && static_cast<int>(out.size()) < 5 * want_special && p0_in_w) {
            x = w_cone_sample();
        } else {
            x = isotropic_chord(g, p0, rng);
        }
        if (x) out.push_back(*x);
    }

    // special strata appended (they replace the tail so the count stays n)
    std::vector<Vec<T>> special;
    if (d.eps == +1) {
        // eigenrays of K with K(X) = +-X: kernels of K -+ id
        for (int sign : {+1, -1}) {
            Matrix<T> m = d.K;
            for (int i = 0; i < 7; ++i) m(i, i) = m(i, i) - ST::from_fraction(sign, 1);
            for (const auto& v : nullspace(m))
                if (!v.is_zero() && ST::is_zero(g.inner(v, v)) && ST::is_zero(g.inner(v, d.S)))
                    special.push_back(v);
        }
    }
    if (d.eps == 0) {
        // kernel rays of K (isotropic, includes the ray of S) and -S
        for (const auto& v : nullspace(d.K))
            if (!v.is_zero() && ST::is_zero(g.inner(v, v))) special.push_back(v);
        special.push_back(d.S);
        special.push_back(-d.S);
    }
    for (size_t i = 0; i < special.size() && i < out.size(); ++i)
        out[out.size() - 1 - i] = special[i];
    return out;
}

}  // namespace ae
