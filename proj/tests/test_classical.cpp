#include "support.hpp"

#include "naive.hpp"
#include "wideopen/classical.hpp"

using namespace wideopen;

namespace {
const Point Z = Point::finite(0);
const Point INF = Point::infinity();
LaurentChunk ch(std::initializer_list<std::pair<const long, Rational>> l) { return LaurentChunk(LaurentChunk::Map(l)); }
RationalFn pole(Rational a, long k, Rational c) {
    RationalFn f;
    f.add_pole(a, k, c);
    return f;
}
} // namespace

TEST_CASE("local expansions") {
    CHECK(local_expansion(pole(0, 1, 1), Z, Window{-2, 1}) == ch({{-1, 1}}));
    CHECK(local_expansion(RationalDiff{pole(0, 1, 1)}, INF, Window{-2, 1}) == ch({{-1, -1}}));
    LaurentChunk g = local_expansion(pole(1, 1, 1), Z, Window{-1, 2});
    // 1/(t-1) = -1/(1-t)
    auto s = naive::inv_pow(1, 1, 2);
    for (long k = 0; k <= 2; ++k) CHECK(g.coeff(k) == -s[k]);
    // a double pole seen from elsewhere
    LaurentChunk h = local_expansion(pole(3, 2, 5), Z, Window{0, 4});
    auto s2 = naive::inv_pow(3, 2, 4);
    for (long k = 0; k <= 4; ++k) CHECK(h.coeff(k) == 5 * s2[k]);
}

TEST_CASE("l1 basis") {
    auto b = l1_basis({{Z, 2}});
    REQUIRE(b.size() == 1);
    CHECK(b[0].fn == pole(0, 2, 1));
    auto c = l1_basis({{Z, 1}, {INF, 1}});
    REQUIRE(c.size() == 1);
    CHECK(c[0].fn == pole(0, 1, 1));
    CHECK(l1_basis({}).empty());
    CHECK(l1_basis({{Z, 0}, {INF, 0}}).empty());
}

TEST_CASE("ld basis") {
    auto a = ld_basis({});
    REQUIRE(a.size() == 1);
    CHECK(a[0] == RationalFn::constant(1));
    auto b = ld_basis({{Z, 1}});
    CHECK(b.size() == 2);
    auto c = ld_basis({{Z, 2}, {INF, 1}});
    REQUIRE(c.size() == 4);
    CHECK(c[0] == RationalFn::constant(1));
    CHECK(c[1] == pole(0, 1, 1));
    CHECK(c[2] == pole(0, 2, 1));
    CHECK(c[3] == RationalFn::monomial(INF, -1));
}

TEST_CASE("classical jet problems, functions") {
    auto r = classical_jet_solve_functions({Z, INF}, {0, 0}, {ch({{-1, 1}, {0, 2}}), ch({{0, 2}})});
    REQUIRE(r.solvable);
    CHECK(r.solution == pole(0, 1, 1) + RationalFn::constant(2));
    auto u = classical_jet_solve_functions({Z, INF}, {1, 0}, {ch({{1, 1}}), LaurentChunk()});
    CHECK(!u.solvable);
    REQUIRE(u.certificate);
    CHECK(u.certificate->element == pole(0, 2, 1));
    // Res_0(t * dt/t^2) = 1
    CHECK(u.certificate->value == 1);
    auto z = classical_jet_solve_functions({Z, INF}, {2, 1}, {LaurentChunk(), LaurentChunk()});
    CHECK(z.solvable);
    CHECK(z.solution.is_zero());
}

TEST_CASE("classical jet problems, differentials") {
    auto r = classical_jet_solve_differentials({Z, INF}, {-1, -1}, {ch({{-1, 1}}), ch({{-1, -1}})}, DiffMode::Principal);
    REQUIRE(r.solvable);
    CHECK(r.solution == pole(0, 1, 1));
    auto u = classical_jet_solve_differentials({Z, INF}, {-1, -1}, {ch({{-1, 1}}), ch({{-1, 1}})}, DiffMode::Principal);
    CHECK(!u.solvable);
    REQUIRE(u.certificate);
    CHECK(u.certificate->value == 2);
    auto g = classical_jet_solve_differentials({Z, INF}, {1, 0}, {ch({{1, 1}}), LaurentChunk()}, DiffMode::Generalized);
    CHECK(!g.solvable);
    REQUIRE(g.certificate);
    CHECK(g.certificate->element == pole(0, 2, 1));
    CHECK(g.certificate->value == 1);
    CHECK_THROWS_AS(classical_jet_solve_differentials({Z, INF}, {1, 0}, {ch({{1, 1}}), LaurentChunk()}, DiffMode::Principal),
                    Error);
}

TEST_CASE("pairing") {
    // f1 = t (j=1), f2 = 0 against {dt/t^2, dt/t}
    auto b = l1_basis({{Z, 2}, {INF, 1}});
    REQUIRE(b.size() == 2);
    std::vector<LaurentChunk> d{ch({{1, 1}}), LaurentChunk()};
    CHECK(pairing({Z, INF}, d, Mode::Functions, b[0].fn) == 1);
    CHECK(pairing({Z, INF}, d, Mode::Functions, b[1].fn) == 0);
}

TEST_CASE("mittag-leffler decomposition") {
    auto d = ml_decomposition(ch({{-1, 1}, {0, 2}, {1, 1}}));
    CHECK(d.plus == ch({{0, 2}, {1, 1}}));
    CHECK(d.minus == ch({{-1, 1}}));
    auto p = ml_decomposition(ch({{0, 1}, {3, 1}}));
    CHECK(p.minus.empty());
    // 1/(t - a) on |t| > |a|: sum a^k t^{-k-1}, all negative
    LaurentChunk::Map m;
    Rational a(1, 8), pw = 1;
    for (long k = 0; k < 6; ++k, pw *= a) m[-k - 1] = pw;
    auto q = ml_decomposition(LaurentChunk(m));
    CHECK(q.plus.empty());
    CHECK(q.minus.coeffs() == m);
}

TEST_CASE("runge approximation") {
    PContext P(2);
    WideOpenDomain W = build_domain(P, {{Z, -1}, {INF, -2}});
    AffinoidSlice X(W, {Rational(-1, 2), Rational(-3, 2)});
    RationalFn f = pole(0, 1, 1);
    auto r = runge_approximate(f, X, {Z, INF}, -5);
    CHECK(r.approximant == f);
    CHECK(r.certified_error.is_bottom());

    // 1/(t - 1/4): pole inside the disc at 0, re-expanded around 0
    WideOpenDomain W2 = build_domain(P, {{Z, -1}, {INF, -2}});
    RationalFn g = pole(Rational(1, 4), 1, 1);
    NormExp prev = NormExp(1000);
    for (Rational eps : {Rational(-1), Rational(-4), Rational(-9)}) {
        auto a = runge_approximate(g, X, {Z, INF}, eps);
        NormExp achieved = spectral_norm_exp(X, g - a.approximant);
        CHECK(achieved <= NormExp(eps));
        CHECK(achieved <= a.certified_error);
        CHECK(a.approximant.pole_points().size() <= 1);
        CHECK(achieved < prev);
        prev = achieved;
    }
    (void)W2;
}
