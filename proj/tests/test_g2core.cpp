#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ae/g2.hpp"

using namespace ae;
using ES = ExactScalar;
using FormE = KForm<ES>;
using VecE = Vec<ES>;
using MatE = Matrix<ES>;

namespace {

ES random_entry(std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 4);
    return ES(Rational(num(rng), den(rng)));
}

FormE random_form(std::mt19937_64& rng, int n, int k) {
    FormE f(n, k);
    for (auto& c : f.comp) c = random_entry(rng);
    return f;
}

VecE random_vec(std::mt19937_64& rng, int n) {
    VecE v(n);
    for (auto& c : v.comp) c = random_entry(rng);
    return v;
}

const G2Structure<ES>& G() {
    static const G2Structure<ES> g = G2Structure<ES>::standard();
    return g;
}

// An element of the annihilator algebra built from the block pattern: rows
// over blocks (1 | 2 | 1 | 2 | 1) with parameters A in gl(2), W, X in R^2,
// Y, Z in (R^2)^*, r, s in R and J = [[0,-1],[1,0]].
MatE block_algebra_element(const MatE& A, const VecE& W, const VecE& X, const VecE& Y,
                           const VecE& Z, const ES& r, const ES& s) {
    ES rt2 = ES::sqrt2();
    MatE m(7, 7);
    ES trA = A(0, 0) + A(1, 1);
    // row 0
    m(0, 0) = trA;
    m(0, 1) = Z[0];
    m(0, 2) = Z[1];
    m(0, 3) = s;
    m(0, 4) = W[0];
    m(0, 5) = W[1];
    // rows 1..2: [X, A, sqrt2 J Z^T, (s/sqrt2) J, -W]
    for (int i = 0; i < 2; ++i) {
        m(1 + i, 0) = X[i];
        for (int j = 0; j < 2; ++j) m(1 + i, 1 + j) = A(i, j);
        m(1 + i, 6) = -W[i];
    }
    // sqrt2 J Z^T: J Z^T = (-Z2, Z1)^T
    m(1, 3) = -rt2 * Z[1];
    m(2, 3) = rt2 * Z[0];
    // (s/sqrt2) J
    m(1, 5) = -(s / rt2);
    m(2, 4) = s / rt2;
    // row 3: [r, -sqrt2 X^T J, 0, -sqrt2 Z J, s]
    m(3, 0) = r;
    // -sqrt2 X^T J = -sqrt2 (X2, -X1)
    m(3, 1) = -rt2 * X[1];
    m(3, 2) = rt2 * X[0];
    // -sqrt2 Z J = -sqrt2 (Z2, -Z1)
    m(3, 4) = -rt2 * Z[1];
    m(3, 5) = rt2 * Z[0];
    m(3, 6) = s;
    // rows 4..5: [Y^T, -(r/sqrt2) J, sqrt2 J X, -A^T, -Z^T]
    for (int i = 0; i < 2; ++i) {
        m(4 + i, 0) = Y[i];
        for (int j = 0; j < 2; ++j) m(4 + i, 4 + j) = -A(j, i);
        m(4 + i, 6) = -Z[i];
    }
    m(4, 2) = r / rt2;
    m(5, 1) = -(r / rt2);
    // sqrt2 J X = sqrt2 (-X2, X1)^T
    m(4, 3) = -rt2 * X[1];
    m(5, 3) = rt2 * X[0];
    // row 6: [0, -Y, r, -X^T, -trA]
    m(6, 1) = -Y[0];
    m(6, 2) = -Y[1];
    m(6, 3) = r;
    m(6, 4) = -X[0];
    m(6, 5) = -X[1];
    m(6, 6) = -trA;
    return m;
}

MatE random_block_element(std::mt19937_64& rng) {
    MatE A(2, 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) A(i, j) = random_entry(rng);
    return block_algebra_element(A, random_vec(rng, 2), random_vec(rng, 2), random_vec(rng, 2),
                                 random_vec(rng, 2), random_entry(rng), random_entry(rng));
}

}  // namespace

TEST_CASE("standard structure invariants") {
    const auto& g = G();
    CHECK(g.h == G2Structure<ES>::standard_h());
    CHECK(g.vol == -FormE::basis(7, {1, 2, 3, 4, 5, 6, 7}));
    CHECK(g.phi.coeff({2, 4, 5}) == ES(1));
    CHECK(g.phi.coeff({1, 4, 7}) == ES(-1));
    CHECK(signature(g.h) == std::pair<int, int>(3, 4));
}

TEST_CASE("contraction identity: Phi against Phi") {
    const auto& g = G();
    Tensor<ES> star = tensor_from_form(g.star_phi);
    for (int A = 0; A < 7; ++A)
        for (int B = 0; B < 7; ++B)
            for (int C = 0; C < 7; ++C)
                for (int D = 0; D < 7; ++D) {
                    ES lhs = ES(0);
                    for (int E = 0; E < 7; ++E) {
                        const ES& pu = g.phi_up1.at({E, A, B});
                        if (!pu.is_zero()) lhs += pu * g.phi.component({E, C, D});
                    }
                    ES rhs = star.at({A, B, C, D}) + g.h(A, C) * g.h(B, D) - g.h(A, D) * g.h(B, C);
                    CHECK(lhs == rhs);
                }
}

TEST_CASE("contraction identity: Phi against star Phi") {
    const auto& g = G();
    for (int A = 0; A < 7; ++A)
        for (int B = 0; B < 7; ++B)
            for (int C = 0; C < 7; ++C)
                for (int D = 0; D < 7; ++D)
                    for (int E = 0; E < 7; ++E) {
                        ES lhs = ES(0);
                        for (int F = 0; F < 7; ++F) {
                            const ES& pu = g.phi_up1.at({F, A, B});
                            if (!pu.is_zero()) lhs += pu * g.star_phi.component({F, C, D, E});
                        }
                        // 3 (H_{A[C} Phi_{DE]B} - H_{B[C} Phi_{DE]A}) with the
                        // bracket antisymmetrizing (C, D, E) at weight 1/3!.
                        auto term = [&](int X) {
                            // H_{X[C} Phi_{DE]Y} summed over signed permutations / 6
                            int Y = (X == A) ? B : A;
                            ES acc = ES(0);
                            int idx[3] = {C, D, E};
                            int perm[3] = {0, 1, 2};
                            // enumerate the 6 permutations explicitly
                            static const int perms[6][4] = {{0, 1, 2, 1}, {0, 2, 1, -1}, {1, 0, 2, -1},
                                                            {1, 2, 0, 1}, {2, 0, 1, 1},  {2, 1, 0, -1}};
                            (void)perm;
                            for (const auto& p : perms) {
                                ES t = g.h(X, idx[p[0]]) * g.phi.component({idx[p[1]], idx[p[2]], Y});
                                acc += (p[3] > 0) ? t : -t;
                            }
                            return acc / ES(6);
                        };
                        ES rhs = ES(3) * (term(A) - term(B));
                        CHECK(lhs == rhs);
                    }
}

TEST_CASE("cross product properties") {
    const auto& g = G();
    // E2 x E3 = sqrt2 E1
    CHECK(g.cross(VecE::basis(7, 2), VecE::basis(7, 3)) == ES::sqrt2() * VecE::basis(7, 1));

    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 60; ++trial) {
        VecE x = random_vec(rng, 7), y = random_vec(rng, 7);
        CHECK(g.cross(x, x).is_zero());
        VecE xy = g.cross(x, y);
        CHECK(g.inner(xy, x) == ES(0));
        CHECK(g.inner(xy, xy) == g.inner(x, x) * g.inner(y, y) - g.inner(x, y) * g.inner(x, y));
        // iterated cross product
        VecE lhs = g.cross(x, g.cross(x, y));
        VecE rhs = -g.inner(x, x) * y + g.inner(x, y) * x;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("genericity and compatibility report") {
    const auto& g = G();
    auto rep = g.genericity_and_compatibility(g.phi, g.h, g.vol);
    CHECK(rep.generic);
    CHECK(rep.metric_match);
    CHECK(rep.orientation_match);

    // decomposable 3-form is not generic
    auto rep2 = g.genericity_and_compatibility(FormE::basis(7, {1, 2, 3}), g.h, g.vol);
    CHECK(!rep2.generic);
    CHECK(!rep2.metric_match);

    // positive scaling keeps the Hitchin signature class (genericity)
    auto rep3 = g.genericity_and_compatibility(ES(4) * g.phi, g.h, g.vol);
    CHECK(rep3.generic);
    CHECK(!rep3.metric_match);
    // negative of phi is still generic
    auto rep4 = g.genericity_and_compatibility(-g.phi, g.h, g.vol);
    CHECK(rep4.generic);
}

TEST_CASE("decompose2: projections and reconstruction") {
    const auto& g = G();
    std::mt19937_64 rng(47);

    // pi27 . iota27 = id
    for (int trial = 0; trial < 40; ++trial) {
        VecE s = random_vec(rng, 7);
        CHECK(pi27(g, iota27(g, s)) == s);
    }

    // random 2-forms: exact reconstruction, remainder in the kernel of pi27
    for (int trial = 0; trial < 40; ++trial) {
        FormE a = random_form(rng, 7, 2);
        auto d = decompose2(g, a);
        CHECK(iota27(g, d.v) + d.m14 == a);
        CHECK(pi27(g, d.m14).is_zero());
    }

    // a block-pattern algebra element, lowered, has no Lambda^2_7 part
    for (int trial = 0; trial < 10; ++trial) {
        MatE m = random_block_element(rng);
        FormE low(7, 2);
        // lower the upper index: (m_flat)_{AB} = H_{AC} m^C_B; antisymmetric
        Tensor<ES> t(7, 2);
        for (int A = 0; A < 7; ++A)
            for (int B = 0; B < 7; ++B) {
                ES acc = ES(0);
                for (int C = 0; C < 7; ++C) acc += g.h(A, C) * m(C, B);
                t.at({A, B}) = acc;
            }
        low = antisymmetrize(t);
        // lowered algebra element must be genuinely antisymmetric
        Tensor<ES> tt = tensor_from_form(low);
        CHECK(tt.at({0, 1}) == t.at({0, 1}));
        CHECK(pi27(g, low).is_zero());
    }

    CHECK(decompose2(g, FormE(7, 2)).v.is_zero());
}

TEST_CASE("pi2_14 endomorphism formula agrees with the remainder") {
    const auto& g = G();
    std::mt19937_64 rng(53);
    Tensor<ES> star = tensor_from_form(g.star_phi);
    for (int trial = 0; trial < 10; ++trial) {
        FormE a = random_form(rng, 7, 2);
        auto d = decompose2(g, a);
        // view the 2-form as an endomorphism A^A_B = Hinv^{AC} a_{CB}
        MatE endo(7, 7), rem(7, 7);
        for (int A = 0; A < 7; ++A)
            for (int B = 0; B < 7; ++B) {
                ES acc = ES(0), accr = ES(0);
                for (int C = 0; C < 7; ++C) {
                    acc += g.hinv(A, C) * a.component({C, B});
                    accr += g.hinv(A, C) * d.m14.component({C, B});
                }
                endo(A, B) = acc;
                rem(A, B) = accr;
            }
        // pi2_14(A)^A_B = (2/3) A^A_B - (1/6) (*Phi)_D{}^{EA}{}_B A^D_E
        MatE out(7, 7);
        for (int A = 0; A < 7; ++A)
            for (int B = 0; B < 7; ++B) {
                ES acc = ES::fraction(2, 3) * endo(A, B);
                for (int D = 0; D < 7; ++D)
                    for (int E = 0; E < 7; ++E) {
                        // (*Phi)_D{}^{EA}{}_B: raise slots 2 and 3
                        ES sv = ES(0);
                        for (int e = 0; e < 7; ++e)
                            for (int a2 = 0; a2 < 7; ++a2) {
                                ES s = star.at({D, e, a2, B});
                                if (!s.is_zero()) sv += g.hinv(E, e) * g.hinv(A, a2) * s;
                            }
                        acc -= ES::fraction(1, 6) * sv * endo(D, E);
                    }
                out(A, B) = acc;
            }
        CHECK(out == rem);
    }
}

TEST_CASE("decompose3: projections and reconstruction") {
    const auto& g = G();
    std::mt19937_64 rng(59);

    // Psi = Phi -> (1, 0, 0)
    auto d0 = decompose3(g, g.phi);
    CHECK(d0.a == ES(1));
    CHECK(d0.v.is_zero());
    CHECK(d0.s27.is_zero());

    // pi37 . iota37 = id and iota37 . pi37 = id on the image
    for (int trial = 0; trial < 20; ++trial) {
        VecE s = random_vec(rng, 7);
        CHECK(pi37(g, iota37(g, s)) == s);
        CHECK(pi31(g, iota37(g, s)) == ES(0));
    }

    // pi327 . imap = id on trace-free symmetric matrices; i(H) = 6 Phi
    CHECK(imap(g, g.h) == ES(6) * g.phi);
    for (int trial = 0; trial < 15; ++trial) {
        MatE s(7, 7);
        for (int i = 0; i < 7; ++i)
            for (int j = i; j < 7; ++j) {
                ES v = random_entry(rng);
                s(i, j) = v;
                s(j, i) = v;
            }
        // remove the H-trace: s -> s - (tr_H s / 7) H, tr_H s = Hinv^{ij} s_{ij}
        ES tr = ES(0);
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) tr += g.hinv(i, j) * s(i, j);
        s = s - (tr / ES(7)) * g.h;
        CHECK(pi327(g, imap(g, s)) == s);
        CHECK(pi31(g, imap(g, s)) == ES(0));
        CHECK(pi37(g, imap(g, s)).is_zero());
    }

    // full reconstruction on random 3-forms
    for (int trial = 0; trial < 40; ++trial) {
        FormE psi = random_form(rng, 7, 3);
        auto d = decompose3(g, psi);
        CHECK(recompose3(g, d) == psi);
        // s27 is trace-free symmetric
        ES tr = ES(0);
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) tr += g.hinv(i, j) * d.s27(i, j);
        CHECK(tr == ES(0));
    }
}

TEST_CASE("algebra membership test and block pattern") {
    const auto& g = G();
    MatE zero(7, 7);
    CHECK(g2_algebra_test(g, zero));

    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        MatE m = random_block_element(rng);
        CHECK(g2_algebra_test(g, m));
    }

    // a Lambda^2_7 generator raised to an endomorphism is H-skew but not in
    // the algebra
    FormE gen = iota27(g, VecE::basis(7, 1));
    MatE endo(7, 7);
    for (int A = 0; A < 7; ++A)
        for (int B = 0; B < 7; ++B) {
            ES acc = ES(0);
            for (int C = 0; C < 7; ++C) acc += g.hinv(A, C) * gen.component({C, B});
            endo(A, B) = acc;
        }
    CHECK(is_h_skew(g.h, endo));
    CHECK(!g2_algebra_test(g, endo));
}

TEST_CASE("annihilator algebra has dimension 14") {
    const auto& g = G();
    auto basis = g2_algebra_basis(g);
    CHECK(basis.size() == 14);
    for (const auto& a : basis) CHECK(g2_algebra_test(g, a));
}
