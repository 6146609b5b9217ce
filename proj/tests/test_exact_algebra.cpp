#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_main.hpp"
#include "vsc/errors.hpp"
#include "vsc/factored_rational.hpp"
#include "vsc/formal_map.hpp"

#include <random>

using namespace vsc;

namespace {

MultiPoly random_poly(const VarSpacePtr &vars, std::mt19937 &rng, int terms, int max_exp)
{
    std::uniform_int_distribution<int> coeff(-9, 9), den(1, 4), ex(0, max_exp);
    MultiPoly p(vars);
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        for (std::size_t i = 0; i < vars->size(); ++i) m.set(i, static_cast<unsigned>(ex(rng)));
        p.add_term(m, ratio(coeff(rng), den(rng)));
    }
    return p;
}

MultiPoly z(const VarSpacePtr &v, std::size_t i)
{
    return MultiPoly::variable(v, i);
}

} // namespace

TEST_CASE("rational text round trip")
{
    CHECK(to_string(Q("6/4")) == "3/2");
    CHECK(to_string(Q("-9/4")) == "-9/4");
    CHECK(to_string(Q("0/7")) == "0");
    CHECK(to_string(Q("12")) == "12");
    CHECK(to_string(Q("41731576876146796884/25")) == "41731576876146796884/25");
    CHECK_THROWS_AS(parse_rational("1/0"), UsageError);
    CHECK_THROWS_AS(parse_rational("abc"), UsageError);
    CHECK(binomial(-3, 2) == 6);
    CHECK(binomial(5, 2) == 10);
    CHECK(rational_pow(Q("-2/3"), -3) == Q("-27/8"));
}

TEST_CASE("poly_mul")
{
    auto v = residue_varspace(2);
    CHECK((z(v, 0) + z(v, 1)) * (z(v, 0) - z(v, 1)) == z(v, 0).pow(2) - z(v, 1).pow(2));
    CHECK((z(v, 0) * MultiPoly(v)).is_zero());
    auto s = z(v, 0) + z(v, 1);
    CHECK(s * s == z(v, 0).pow(2) + z(v, 0) * z(v, 1) * BigRational(2) + z(v, 1).pow(2));
    CHECK_THROWS_AS(z(v, 0) * z(residue_varspace(3), 0), UsageError);
}

TEST_CASE("distributivity on random polynomials")
{
    std::mt19937 rng(7);
    auto v = residue_varspace(3);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_poly(v, rng, 5, 3), b = random_poly(v, rng, 5, 3), c = random_poly(v, rng, 4, 2);
        CHECK((a + b) * c == a * c + b * c);
    }
}

TEST_CASE("linear form normalization merges proportional forms")
{
    auto v = residue_varspace(3);
    FactoredRational f(MultiPoly::constant(v, 1));
    f.divide_by({0, 2, -1}).divide_by({0, -4, 2});
    REQUIRE(f.denominator().size() == 1);
    CHECK(f.denominator()[0].exponent == 2);
    CHECK(f.denominator()[0].form.coeffs() == std::vector<BigRational>{0, 1, Q("-1/2")});
    // 1/((2z1 - z2)(-4z1 + 2z2)) = -1/8 · 1/(z1 - z2/2)^2
    CHECK(f.scalar() == Q("-1/8"));
}

TEST_CASE("fr_add")
{
    auto v = residue_varspace(2);
    FactoredRational a(MultiPoly::constant(v, 1)), b(MultiPoly::constant(v, 1));
    a.divide_by_variable(0);
    b.divide_by_variable(1);
    FactoredRational expected(z(v, 0) + z(v, 1));
    expected.divide_by_variable(0).divide_by_variable(1);
    CHECK(fr_add(a, b).equals(expected));
    CHECK(fr_add(a, FactoredRational::zero(v)).equals(a));
    FactoredRational neg(MultiPoly::constant(v, -1));
    neg.divide_by_variable(0);
    auto zero = fr_add(a, neg);
    CHECK(zero.is_zero());
    CHECK(zero.denominator().empty());
}

TEST_CASE("exact division by a linear form")
{
    auto v = residue_varspace(3);
    auto form = LinearForm::normalize({0, 2, -1}).first;
    auto p = (z(v, 1) * BigRational(2) - z(v, 2)) * (z(v, 0).pow(2) + z(v, 2));
    auto q = divide_exact(p, form);
    REQUIRE(q);
    CHECK(*q * form.to_poly(v) == p);
    CHECK_FALSE(divide_exact(z(v, 0) + z(v, 1), form));
    FactoredRational f(p);
    f.divide_by({0, 2, -1}, 2);
    FactoredRational g = f;
    g.cancel();
    CHECK(g.denominator().size() == 1);
    CHECK(g.denominator()[0].exponent == 1);
    CHECK(g.equals(f));
}

TEST_CASE("homogeneity degree")
{
    auto v = residue_varspace(2);
    FactoredRational f(MultiPoly::constant(v, 1));
    f.divide_by_variable(0).divide_by_variable(1);
    CHECK(f.homogeneity_degree() == -2);
    FactoredRational g(z(v, 0) + z(v, 1).pow(2));
    CHECK_FALSE(g.homogeneity_degree().has_value());
}

TEST_CASE("series_mul")
{
    const std::vector<int> cls{2};
    const HalfInt two = HalfInt::from_int(2);
    auto x = GradedSeries::coupling(cls, two, 2);
    GradedSeries qx(cls, two);
    qx.add_term(HalfInt::from_int(1), GradedSeries::monomial_of(qx, {{2, 1}}), 1);
    auto one = GradedSeries::constant(cls, two, 1);
    auto prod = series_mul(one + qx, one - qx);
    GradedSeries expected = one;
    expected.add_term(two, GradedSeries::monomial_of(expected, {{2, 2}}), -1);
    CHECK(prod == expected);
    CHECK(series_mul(x, one) == x);
    GradedSeries half(cls, two);
    half.add_term(HalfInt::halves(1), Monomial{}, 1);
    auto q1 = series_mul(half, half);
    CHECK(q1.coefficient(HalfInt::from_int(1), {}) == 1);
    CHECK(q1.size() == 1);
}

TEST_CASE("canonical text round trip")
{
    const std::vector<int> cls{0, 2, 3};
    GradedSeries s(cls, HalfInt::halves(5));
    s.add_term(HalfInt::halves(1), {}, 2);
    s.add_term(HalfInt::halves(3), GradedSeries::monomial_of(s, {{2, 3}}), Q("-3/8"));
    s.add_term(HalfInt::halves(3), GradedSeries::monomial_of(s, {{2, 1}, {3, 1}}), -1);
    s.add_term(HalfInt::from_int(2), GradedSeries::monomial_of(s, {{0, 1}}), Q("13/24"));
    SeriesSymbols sym{"Q", "t"};
    const std::string text = to_canonical_text(s, sym);
    CHECK(text.find("-3/8 * Q^{3/2} * t2^3") != std::string::npos);
    auto back = parse_canonical_text(text, cls, HalfInt::halves(5), sym);
    CHECK(back == s);
    CHECK(to_canonical_text(back, sym) == text);
    CHECK(to_compact_text(s, sym).rfind("2 Q^{1/2}", 0) == 0);
}

TEST_CASE("series_compose")
{
    const std::vector<int> cls{2};
    const HalfInt two = HalfInt::from_int(2);
    auto x = GradedSeries::coupling(cls, two, 2);
    CHECK(series_compose(x, FormalMap::identity(cls, two)) == x);

    GradedSeries s(cls, two);
    s.add_term(HalfInt::from_int(1), GradedSeries::monomial_of(s, {{2, 2}}), 1);
    GradedSeries shift(cls, two);
    shift.add_term(HalfInt::from_int(1), GradedSeries::monomial_of(shift, {{2, 4}}), -1);
    FormalMap m(cls, two, {shift});
    auto r = series_compose(s, m);
    GradedSeries expected(cls, two);
    expected.add_term(HalfInt::from_int(1), GradedSeries::monomial_of(expected, {{2, 2}}), 1);
    expected.add_term(two, GradedSeries::monomial_of(expected, {{2, 5}}), -2);
    CHECK(r == expected);
}

TEST_CASE("formal map contract")
{
    const std::vector<int> cls{2};
    GradedSeries bad(cls, HalfInt::from_int(1));
    bad.add_term(HalfInt{}, GradedSeries::monomial_of(bad, {{2, 2}}), 1);
    CHECK_THROWS_AS(FormalMap(cls, HalfInt::from_int(1), {bad}), ContractError);
}

TEST_CASE("invert_formal_map")
{
    const std::vector<int> cls{2};
    const HalfInt one = HalfInt::from_int(1);
    auto id = FormalMap::identity(cls, one);
    CHECK(invert_formal_map(id).shift(2).is_zero());

    GradedSeries shift(cls, one);
    shift.add_term(one, GradedSeries::monomial_of(shift, {{2, 4}}), Q("1/4"));
    FormalMap m(cls, one, {shift});
    auto inv = invert_formal_map(m);
    CHECK(inv.shift(2).coefficient(one, {{2, 4}}) == Q("-1/4"));
    CHECK(inv.shift(2).size() == 1);
    // m^{-1} ∘ m is the identity.
    auto round = series_compose(inv.component(2), m);
    CHECK(round == GradedSeries::coupling(cls, one, 2));
}

TEST_CASE("inversion with a log coupling")
{
    // t1 = x1 + q x2, t2 = x2 + q^2 x2^2; composing back must give the identity.
    const std::vector<int> cls{1, 2};
    const HalfInt bound = HalfInt::from_int(4);
    GradedSeries s1(cls, bound), s2(cls, bound);
    s1.add_term(HalfInt::from_int(1), GradedSeries::monomial_of(s1, {{2, 1}}), 1);
    s2.add_term(HalfInt::from_int(2), GradedSeries::monomial_of(s2, {{2, 2}}), Q("1/3"));
    FormalMap m(cls, bound, {s1, s2});
    auto inv = invert_formal_map(m);
    auto twice = invert_formal_map(inv);
    for (int j : cls) {
        CHECK(series_compose(inv.component(j), m) == GradedSeries::coupling(cls, bound, j));
        CHECK(twice.shift(j) == m.shift(j));
    }
    // q itself: Q = q e^{q x2}, so q = Q e^{-(shift of x1 in t-coordinates)}.
    GradedSeries q(cls, bound);
    q.add_term(HalfInt::from_int(1), {}, 1);
    auto back = series_compose(series_compose(q, inv), m);
    CHECK(back == q);
}
