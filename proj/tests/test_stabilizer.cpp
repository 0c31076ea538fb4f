#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "ae/stabilizer.hpp"

using namespace ae;
using ES = ExactScalar;
using FormE = KForm<ES>;
using VecE = Vec<ES>;
using MatE = Matrix<ES>;
using ParamE = FamilyParam<ES>;

namespace {

const G2Structure<ES>& G() {
    static const G2Structure<ES> g = G2Structure<ES>::standard();
    return g;
}

VecE rep_S(int eps) {
    switch (eps) {
        case -1: return VecE::basis(7, 2) + ES::fraction(1, 2) * VecE::basis(7, 5);  // H(S,S) = 1
        case +1: return VecE::basis(7, 4);                                           // H(S,S) = -1
        default: return VecE::basis(7, 1);                                           // isotropic
    }
}

// rational points of cos^2 + sin^2 = 1 via the tangent half-angle chord
std::pair<ES, ES> circle_point(long num, long den) {
    ES t = ES::fraction(num, den);
    ES one = ES(1);
    ES d = one + t * t;
    return {(one - t * t) / d, (ES(2) * t) / d};
}

// rational points of cosh^2 - sinh^2 = 1 with cosh > 0 (|t| < 1)
std::pair<ES, ES> hyperbola_point(long num, long den) {
    ES t = ES::fraction(num, den);
    ES one = ES(1);
    ES d = one - t * t;
    return {(one + t * t) / d, (ES(2) * t) / d};
}

MatE k_prime(const G2Structure<ES>& g, const VecE& S, const FormE& phi_prime) {
    FormE sphi = hook(S, phi_prime);
    MatE k(7, 7);
    for (int A = 0; A < 7; ++A)
        for (int B = 0; B < 7; ++B) {
            ES acc = ES(0);
            for (int D = 0; D < 7; ++D) acc += g.hinv(A, D) * sphi.component({D, B});
            k(A, B) = -acc;
        }
    return k;
}

}  // namespace

TEST_CASE("stabilizer data invariants for the three causality types") {
    const auto& g = G();
    for (int eps : {-1, 0, +1}) {
        CAPTURE(eps);
        VecE S = rep_S(eps);
        auto d = make_stabilizer(g, S);
        CHECK(d.eps == eps);

        // K^2 = eps id + S (x) S-flat
        FormE sflat = lower_vector(g.h, S);
        MatE k2 = d.K * d.K;
        for (int i = 0; i < 7; ++i)
            for (int j = 0; j < 7; ++j) {
                ES expect = S[i] * sflat.component({j});
                if (i == j) expect += ES(eps);
                CHECK(k2(i, j) == expect);
            }

        // image of K lies in W = S-perp
        std::mt19937_64 rng(101);
        std::uniform_int_distribution<long> num(-9, 9);
        for (int trial = 0; trial < 10; ++trial) {
            VecE x(7);
            for (int i = 0; i < 7; ++i) x.comp[i] = ES(num(rng));
            CHECK(g.inner(d.K * x, S) == ES(0));
        }

        // Phi_I + Phi_K = H(S,S) Phi
        CHECK(d.phi_I + d.phi_K == g.inner(S, S) * g.phi);

        // hook relations
        CHECK(hook(S, d.phi_I).is_zero());
        CHECK(hook(S, d.phi_J).is_zero());
        CHECK(hook(S, d.phi_K) == g.inner(S, S) * hook(S, g.phi));

        // W basis: six vectors orthogonal to S
        CHECK(d.W_basis.size() == 6);
        for (const auto& w : d.W_basis) CHECK(g.inner(w, S) == ES(0));

        // the annihilator of S inside the algebra has dimension 8
        CHECK(stabilizer_annihilator_dim(g, S) == 8);
    }
}

TEST_CASE("stabilizer input validation") {
    const auto& g = G();
    CHECK_THROWS_AS(make_stabilizer(g, VecE(7)), std::invalid_argument);
    CHECK_THROWS_AS(make_stabilizer(g, ES(2) * VecE::basis(7, 4)), std::invalid_argument);
}

TEST_CASE("isotropic filtration dimensions") {
    const auto& g = G();
    auto d = make_stabilizer(g, rep_S(0));
    CHECK(filtration_dims(d) == std::vector<int>{7, 6, 4, 3, 1, 0});
    // K shifts the filtration: K(W) lies in im K, K(im K) in ker K
    CHECK(matrix_rank(d.K * d.K) == 1);  // K^2 = S (x) S-flat
}

TEST_CASE("family members are generic, compatible, and share K") {
    const auto& g = G();
    std::vector<std::pair<int, ParamE>> witnesses;
    // eps = -1: rational circle points
    for (long k = -3; k <= 3; ++k) {
        auto [c, s] = circle_point(k, 4);
        witnesses.push_back({-1, ParamE::circle(c, s)});
    }
    // eps = +1: rational hyperbola points on both branches
    for (long k = -2; k <= 2; ++k) {
        auto [c, s] = hyperbola_point(k, 3);
        witnesses.push_back({+1, ParamE::hyperbolic(-1, c, s)});
        witnesses.push_back({+1, ParamE::hyperbolic(+1, c, s)});
    }
    // eps = 0: rational parabolic parameters
    for (long k = -3; k <= 3; ++k) witnesses.push_back({0, ParamE::parabolic(ES::fraction(k, 2))});
    // raw witnesses with Abar = -B^2/2 for eps = 0
    for (long k = 1; k <= 3; ++k) {
        ES b = ES::fraction(k, 2);
        witnesses.push_back({0, ParamE::raw(-(b * b) / ES(2), b)});
    }

    std::map<int, StabilizerData<ES>> sds;
    for (int eps : {-1, 0, 1}) sds.emplace(eps, make_stabilizer(g, rep_S(eps)));

    for (const auto& [eps, p] : witnesses) {
        CAPTURE(eps);
        const auto& sd = sds.at(eps);
        FormE phi_prime = family_member(sd, g, p);
        auto rep = g.genericity_and_compatibility(phi_prime, g.h, g.vol);
        CHECK(rep.generic);
        CHECK(rep.metric_match);
        CHECK(rep.orientation_match);
        // the contracted endomorphism is family-invariant
        CHECK(k_prime(g, sd.S, phi_prime) == sd.K);
    }

    // raw and closed-form parameterizations agree: for eps != 0 the raw pair
    // (Abar, B) = (A + eps, B) with A^2 - eps B^2 = 1 reproduces the closed
    // forms
    {
        auto [c, s] = circle_point(1, 2);
        const auto& sd = sds.at(-1);
        CHECK(family_member(sd, g, ParamE::raw(c - ES(1), s)) ==
              family_member(sd, g, ParamE::circle(c, s)));
    }
    {
        auto [c, s] = hyperbola_point(1, 2);
        const auto& sd = sds.at(+1);
        CHECK(family_member(sd, g, ParamE::raw(c + ES(1), s)) ==
              family_member(sd, g, ParamE::hyperbolic(+1, c, s)));
        CHECK(family_member(sd, g, ParamE::raw(-c + ES(1), s)) ==
              family_member(sd, g, ParamE::hyperbolic(-1, c, s)));
    }

    // constraint violations are rejected
    CHECK_THROWS_AS(family_member(sds.at(-1), g, ParamE::circle(ES(1), ES(1))),
                    std::invalid_argument);
    CHECK_THROWS_AS(family_member(sds.at(0), g, ParamE::raw(ES(1), ES(1))), std::invalid_argument);
    CHECK_THROWS_AS(family_member(sds.at(0), g, ParamE::circle(ES(1), ES(0))),
                    std::invalid_argument);
}

TEST_CASE("derivative at parameter zero is Phi_J") {
    const auto& g = G();
    using Kind = ParamE::Kind;
    CHECK(derivative_at_zero(make_stabilizer(g, rep_S(-1)), g, Kind::Circle) ==
          make_stabilizer(g, rep_S(-1)).phi_J);
    CHECK(derivative_at_zero(make_stabilizer(g, rep_S(+1)), g, Kind::Hyperbolic) ==
          make_stabilizer(g, rep_S(+1)).phi_J);
    CHECK(derivative_at_zero(make_stabilizer(g, rep_S(0)), g, Kind::Parabolic) ==
          make_stabilizer(g, rep_S(0)).phi_J);
}

TEST_CASE("distinguished parameter values") {
    const auto& g = G();
    auto d0 = make_stabilizer(g, rep_S(0));
    CHECK(family_member(d0, g, ParamE::parabolic(ES(0))) == g.phi);

    auto dm = make_stabilizer(g, rep_S(-1));
    CHECK(family_member(dm, g, ParamE::circle(ES(-1), ES(0))) == -dm.phi_I + dm.phi_K);
    CHECK(family_member(dm, g, ParamE::circle(ES(1), ES(0))) == g.phi);

    auto dp = make_stabilizer(g, rep_S(+1));
    CHECK(family_member(dp, g, ParamE::hyperbolic(-1, ES(1), ES(0))) == g.phi);

    // the null-complementary limit identity: Phi_s - Phi + (s^2/2) Phi_I
    // - s Phi_J = 0 exactly
    for (long k = -4; k <= 4; ++k) {
        ES s = ES::fraction(k, 3);
        FormE phi_s = family_member(d0, g, ParamE::parabolic(s));
        CHECK((phi_s - g.phi + (s * s / ES(2)) * d0.phi_I - s * d0.phi_J).is_zero());
    }
}

TEST_CASE("epsilon-complex volume forms and reconstruction") {
    const auto& g = G();
    struct Case {
        int eps;
        ES A, B;
    };
    std::vector<Case> cases = {
        {-1, ES(1), ES(0)},
        {-1, ES::fraction(3, 5), ES::fraction(4, 5)},
        {+1, ES(1), ES(0)},
        {+1, ES::fraction(5, 4), ES::fraction(3, 4)},
    };
    for (const auto& c : cases) {
        CAPTURE(c.eps);
        auto d = make_stabilizer(g, rep_S(c.eps));
        auto [psi, phi_rec] = epsilon_volume_and_reconstruct(d, g, c.A, c.B);
        CHECK(psi.eps == c.eps);

        auto [r1, r2] = eps_volume_normalization_residuals(d, g, psi);
        CHECK(r1.is_zero());
        CHECK(r2.is_zero());

        auto rep = g.genericity_and_compatibility(phi_rec, g.h, g.vol);
        CHECK(rep.generic);
        CHECK(rep.metric_match);
        CHECK(rep.orientation_match);

        // the reconstruction lies in the family through Phi
        auto rr = recover_scale(g, phi_rec);
        bool in_family = rr.status == RecoveryResult<ES>::Status::Ok ||
                         rr.status == RecoveryResult<ES>::Status::Identical;
        CHECK(in_family);
    }

    // (A,B) = (1,0): the reconstruction is Phi_I - eps Phi_K, which for
    // eps = -1 is Phi itself and for eps = +1 is the antipodal member
    auto dm = make_stabilizer(g, rep_S(-1));
    CHECK(epsilon_volume_and_reconstruct(dm, g, ES(1), ES(0)).second == g.phi);
    auto dp = make_stabilizer(g, rep_S(+1));
    CHECK(epsilon_volume_and_reconstruct(dp, g, ES(1), ES(0)).second ==
          family_member(dp, g, ParamE::hyperbolic(+1, ES(1), ES(0))));

    CHECK_THROWS_AS(epsilon_volume_and_reconstruct(make_stabilizer(g, rep_S(0)), g, ES(1), ES(0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(epsilon_volume_and_reconstruct(dm, g, ES(1), ES(1)), std::invalid_argument);
}

TEST_CASE("antipodal members") {
    const auto& g = G();
    auto dm = make_stabilizer(g, rep_S(-1));
    FormE phi_pi = family_member(dm, g, ParamE::circle(ES(-1), ES(0)));
    CHECK(antipodal_test(g, g.phi, phi_pi));
    CHECK(!antipodal_test(g, g.phi, g.phi));

    auto dp = make_stabilizer(g, rep_S(+1));
    FormE phi0p = family_member(dp, g, ParamE::hyperbolic(+1, ES(1), ES(0)));
    CHECK(antipodal_test(g, g.phi, phi0p));

    // Ricci-flat families admit no antipodal pairs
    auto d0 = make_stabilizer(g, rep_S(0));
    for (long a = -3; a <= 3; ++a)
        for (long b = a + 1; b <= 3; ++b) {
            FormE pa = family_member(d0, g, ParamE::parabolic(ES(a)));
            FormE pb = family_member(d0, g, ParamE::parabolic(ES(b)));
            CHECK(!antipodal_test(g, pa, pb));
        }

    // Phi ^ Phi' is proportional to the Hodge dual of S-flat with factor
    // +-4B, with a sign fixed across the family
    int fixed_sign = 0;
    for (long k = -3; k <= 3; ++k) {
        auto [c, s] = circle_point(k, 4);
        FormE phi_prime = family_member(dm, g, ParamE::circle(c, s));
        FormE w = wedge(g.phi, phi_prime);
        FormE dual = hodge_star(g.h, g.vol, lower_vector(g.h, dm.S));
        ES factor = ES(4) * s;
        if (s.is_zero()) {
            CHECK(w.is_zero());
            continue;
        }
        if (w == factor * dual) {
            if (fixed_sign == 0) fixed_sign = +1;
            CHECK(fixed_sign == +1);
        } else if (w == -factor * dual) {
            if (fixed_sign == 0) fixed_sign = -1;
            CHECK(fixed_sign == -1);
        } else {
            FAIL("wedge is not +-4B times the dual of S-flat");
        }
    }
    CHECK(fixed_sign != 0);
}

TEST_CASE("recovery roundtrips for all causality types") {
    const auto& g = G();

    // eps = -1: 50+ rational circle points
    {
        auto d = make_stabilizer(g, rep_S(-1));
        int count = 0;
        for (long num = -13; num <= 13; ++num)
            for (long den : {5, 7}) {
                auto [c, s] = circle_point(num, den);
                if (s.is_zero()) continue;
                FormE phi_prime = family_member(d, g, ParamE::circle(c, s));
                auto r = recover_scale(g, phi_prime);
                REQUIRE(r.status == RecoveryResult<ES>::Status::Ok);
                CHECK(r.eps == -1);
                CHECK(r.branch == "spacelike-T");
                CHECK((r.S == d.S || r.S == -d.S));
                CHECK(r.param.kind == ParamE::Kind::Circle);
                CHECK(r.param.a == c);
                // the cosine also satisfies the trace formula
                CHECK(r.param.a == (ES(7) * pi31(g, phi_prime) - ES(3)) / ES(4));
                ++count;
            }
        CHECK(count >= 50);
    }

    // eps = +1: 50+ rational hyperbola points on both branches
    {
        auto d = make_stabilizer(g, rep_S(+1));
        int count = 0;
        for (long num = -13; num <= 13; ++num)
            for (long den : {17}) {
                auto [c, s] = hyperbola_point(num, den);
                if (s.is_zero()) continue;
                for (int branch : {-1, +1}) {
                    FormE phi_prime = family_member(d, g, ParamE::hyperbolic(branch, c, s));
                    auto r = recover_scale(g, phi_prime);
                    REQUIRE(r.status == RecoveryResult<ES>::Status::Ok);
                    CHECK(r.eps == +1);
                    CHECK(r.branch == "timelike-T");
                    CHECK((r.S == d.S || r.S == -d.S));
                    CHECK(r.param.kind == ParamE::Kind::Hyperbolic);
                    CHECK(r.param.branch == branch);
                    CHECK(r.param.a == c);
                    ++count;
                }
            }
        CHECK(count >= 50);
    }

    // eps = 0: 50+ rational parabolic parameters; the recovered S is the
    // rescaling s * S that normalizes the parameter to 1
    {
        auto d = make_stabilizer(g, rep_S(0));
        int count = 0;
        for (long num = -14; num <= 14; ++num)
            for (long den : {3, 5}) {
                ES s = ES::fraction(num, den);
                if (s.is_zero()) continue;
                FormE phi_prime = family_member(d, g, ParamE::parabolic(s));
                auto r = recover_scale(g, phi_prime);
                REQUIRE(r.status == RecoveryResult<ES>::Status::Ok);
                CHECK(r.eps == 0);
                CHECK(r.branch == "isotropic-T");
                CHECK(r.S == s * d.S);
                CHECK(r.param.kind == ParamE::Kind::Parabolic);
                CHECK(r.param.b == ES(1));
                ++count;
            }
        CHECK(count >= 50);
    }
}

TEST_CASE("recovery special branches") {
    const auto& g = G();

    // identical structure
    auto r0 = recover_scale(g, g.phi);
    CHECK(r0.status == RecoveryResult<ES>::Status::Identical);

    // antipodal branch, eps = -1
    auto dm = make_stabilizer(g, rep_S(-1));
    auto rm = recover_scale(g, family_member(dm, g, ParamE::circle(ES(-1), ES(0))));
    REQUIRE(rm.status == RecoveryResult<ES>::Status::Ok);
    CHECK(rm.eps == -1);
    CHECK(rm.branch == "antipodal-plus");
    CHECK((rm.S == dm.S || rm.S == -dm.S));

    // antipodal branch, eps = +1
    auto dp = make_stabilizer(g, rep_S(+1));
    auto rp = recover_scale(g, family_member(dp, g, ParamE::hyperbolic(+1, ES(1), ES(0))));
    REQUIRE(rp.status == RecoveryResult<ES>::Status::Ok);
    CHECK(rp.eps == +1);
    CHECK(rp.branch == "antipodal-minus");
    CHECK((rp.S == dp.S || rp.S == -dp.S));

    // a compatible-looking 3-form not in any family is reported, not accepted
    MatE s(7, 7);
    s(0, 0) = ES(1);
    s(1, 1) = ES(2);
    s(2, 2) = ES(3);  // trace-free w.r.t. H (no diagonal pairing entries)
    FormE fake = g.phi + imap(g, s);
    auto rf = recover_scale(g, fake);
    CHECK(rf.status == RecoveryResult<ES>::Status::NotInFamily);
}

TEST_CASE("ray classifier on the flat model") {
    const auto& g = G();

    // spec'd examples
    auto dm = make_stabilizer(g, rep_S(-1));
    CHECK(classify_ray(g, dm, VecE::basis(7, 1)) == OrbitLabel::M4);

    auto d0 = make_stabilizer(g, rep_S(0));
    CHECK(classify_ray(g, d0, VecE::basis(7, 1)) == OrbitLabel::M0p);
    CHECK(classify_ray(g, d0, -VecE::basis(7, 1)) == OrbitLabel::M0m);

    auto dp = make_stabilizer(g, rep_S(+1));
    // an exact eigenray with X x S = X
    bool found_eigen = false;
    for (int sign : {+1, -1}) {
        MatE m = dp.K;
        for (int i = 0; i < 7; ++i) m(i, i) = m(i, i) - ES(sign);
        for (const auto& v : nullspace(m)) {
            if (v.is_zero() || !g.inner(v, v).is_zero() || !g.inner(v, dp.S).is_zero()) continue;
            // X x S = -K(X) = -sign X
            auto label = classify_ray(g, dp, v);
            CHECK(label == (sign < 0 ? OrbitLabel::M2p : OrbitLabel::M2m));
            found_eigen = true;
        }
    }
    CHECK(found_eigen);

    // misuse
    CHECK_THROWS_AS(classify_ray(g, dm, VecE::basis(7, 4)), std::invalid_argument);  // not isotropic
    CHECK_THROWS_AS(classify_ray(g, dm, VecE(7)), std::invalid_argument);            // zero

    // partition of a stratified pseudo-random sample, with the observed label
    // set matching the inventory for each causality type
    for (int eps : {-1, 0, +1}) {
        CAPTURE(eps);
        auto d = make_stabilizer(g, rep_S(eps));
        auto rays = sample_isotropic_rays(g, d, 2000, 12345u + static_cast<unsigned>(eps + 1));
        std::set<OrbitLabel> seen;
        for (const auto& x : rays) seen.insert(classify_ray(g, d, x));
        auto allowed = allowed_labels(eps);
        std::set<OrbitLabel> expect(allowed.begin(), allowed.end());
        CHECK(seen == expect);
    }
}
