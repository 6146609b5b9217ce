#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_main.hpp"
#include "vsc/correlators.hpp"
#include "vsc/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace vsc;

namespace {

MultiPoly z(const VarSpacePtr &v, std::size_t i, unsigned p = 1)
{
    return MultiPoly::variable(v, i, p);
}

std::vector<BigRational> moving_form(std::size_t n, std::size_t j)
{
    std::vector<BigRational> f(n);
    f[j] = 2;
    f[j - 1] = -1;
    f[j + 1] = -1;
    return f;
}

// Homogeneous numerator of the given degree with small random coefficients.
MultiPoly random_homogeneous(const VarSpacePtr &vars, unsigned degree, std::mt19937 &rng)
{
    std::uniform_int_distribution<int> coeff(1, 5);
    std::uniform_int_distribution<std::size_t> pick(0, vars->size() - 1);
    MultiPoly p(vars);
    while (p.is_zero()) {
        Monomial m;
        for (unsigned e = 0; e < degree; ++e) {
            const std::size_t i = pick(rng);
            m.set(i, m[i] + 1);
        }
        p.add_term(m, coeff(rng));
    }
    return p;
}

// A closed-type integrand over z_0..z_d with random pole orders; about half land on the nonvanishing degree.
FactoredRational random_structural(int d, std::mt19937 &rng)
{
    const std::size_t n = static_cast<std::size_t>(d + 1);
    auto vars = residue_varspace(n);
    std::uniform_int_distribution<int> ord(1, 3), numdeg(0, 4), coin(0, 1);
    std::vector<int> orders(n);
    int den = static_cast<int>(n) - 2;
    for (auto &o : orders) den += (o = ord(rng));
    int deg = numdeg(rng);
    if (coin(rng) && den >= static_cast<int>(n)) deg = den - static_cast<int>(n);
    FactoredRational f(random_homogeneous(vars, static_cast<unsigned>(deg), rng));
    for (std::size_t j = 0; j < n; ++j) f.divide_by_variable(j, orders[j]);
    for (std::size_t j = 1; j + 1 < n; ++j) f.divide_by(moving_form(n, j));
    return f;
}

std::vector<std::size_t> descending(std::size_t n)
{
    std::vector<std::size_t> o(n);
    for (std::size_t i = 0; i < n; ++i) o[i] = n - 1 - i;
    return o;
}

} // namespace

TEST_CASE("kernel examples")
{
    auto v = residue_varspace(2);
    CHECK(kernel_w(v, 0, 1, 0, 1).is_zero());
    CHECK(kernel_w(v, 1, 1, 0, 1).constant_value() == 1);
    CHECK(kernel_w_poly(v, 3, 1, 0, 1) == z(v, 0, 2) + z(v, 0) * z(v, 1) + z(v, 1, 2));
    CHECK(kernel_e(v, 1, 0, 1) == z(v, 0) * z(v, 1));
    const MultiPoly e3 = z(v, 0) * z(v, 1) * (z(v, 0) + z(v, 1) * BigRational(2)) *
                         (z(v, 0) * BigRational(2) + z(v, 1)) * BigRational(9);
    CHECK(kernel_e(v, 3, 0, 1) == e3);
    for (int k = 1; k <= 6; ++k) {
        auto v1 = residue_varspace(1);
        CHECK(kernel_e(v1, k, 0, 0) == z(v1, 0, static_cast<unsigned>(k + 1)) * rational_pow(k, k + 1));
    }
    CHECK(kernel_f(4, 1, 1).scalar == 2);
    CHECK(kernel_f(4, 1, 1).degree == 1);
    CHECK(kernel_f(8, 9, 1).scalar == 1890);
    CHECK(kernel_f(8, 9, 1).degree == 5);
    CHECK_THROWS_AS(kernel_f(8, 2, 1), UsageError);
}

TEST_CASE("default radius profiles")
{
    auto r1 = default_radii(1, Sector::Closed);
    CHECK(r1.radii == std::vector<BigRational>{7, 7});
    auto r2 = default_radii(2, Sector::Closed);
    CHECK(r2.radii == std::vector<BigRational>{14, 18, 14});
    CHECK(admissible_radii(RadiusProfile{{3, 2}}, Sector::Open));
    CHECK_FALSE(admissible_radii(RadiusProfile{{7, 2}}, Sector::Open));
    for (int d = 1; d <= 8; ++d) {
        CHECK(admissible_radii(default_radii(d, Sector::Closed), Sector::Closed));
        CHECK(admissible_radii(default_radii(d, Sector::Open), Sector::Open));
    }
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        auto p = perturb_radii(default_radii(4, Sector::Closed), Sector::Closed, rng);
        CHECK(admissible_radii(p, Sector::Closed));
    }
}

TEST_CASE("residue_stage examples")
{
    auto v2 = residue_varspace(2);
    FactoredRational f(MultiPoly::constant(v2, 1));
    f.divide_by_variable(0).divide_by_variable(1);
    FactoredRational expect(MultiPoly::constant(v2, 1));
    expect.divide_by_variable(1);
    CHECK(residue_stage(f, 0, default_radii(1, Sector::Closed)).equals(expect));

    auto v3 = residue_varspace(3);
    const auto profile = default_radii(2, Sector::Closed);
    FactoredRational g(MultiPoly::constant(v3, 1));
    g.divide_by_variable(0, 3).divide_by(moving_form(3, 1));
    const auto poles = plan_poles(g, 0, profile);
    REQUIRE(poles.size() == 1);
    CHECK(poles[0].order == 3);
    FactoredRational g_expect(MultiPoly::constant(v3, 1));
    g_expect.divide_by({0, 2, -1}, 3);
    CHECK(residue_stage(g, 0, profile).equals(g_expect));

    // Origin and moving pole are both enclosed; their residues cancel since the degree is -4.
    FactoredRational h(MultiPoly::constant(v3, 1));
    h.divide_by_variable(1, 3).divide_by(moving_form(3, 1));
    CHECK(plan_poles(h, 1, profile).size() == 2);
    CHECK(residue_stage(h, 1, profile).is_zero());
    FactoredRational origin_only = residue_at(h, 1, {0, 0, 0});
    FactoredRational origin_expect(MultiPoly::constant(v3, -4));
    origin_expect.divide_by({1, 0, 1}, 3);
    CHECK(origin_only.equals(origin_expect));
}

TEST_CASE("indecisive poles are reported")
{
    auto v3 = residue_varspace(3);
    FactoredRational f(MultiPoly::constant(v3, 1));
    f.divide_by({-1, 1, -1}).divide_by_variable(1);
    // Root z1 = z0 + z2 has bounds [0, 20] around r_1 = 10.
    CHECK_THROWS_AS(plan_poles(f, 1, RadiusProfile{{10, 10, 10}}), IndecisivePole);
    try {
        plan_poles(f, 1, RadiusProfile{{10, 10, 10}});
    } catch (const IndecisivePole &e) {
        CHECK(e.radius() == "10");
        CHECK(e.upper() == "20");
    }
}

TEST_CASE("iterated_residue examples")
{
    auto v = residue_varspace(2);
    FactoredRational f(z(v, 0, 2) * z(v, 1, 2));
    f.divide_by_variable(0, 3).divide_by_variable(1, 3);
    CHECK(iterated_residue(f, default_radii(1, Sector::Closed)) == 1);

    const CorrelatorSpec spec{Model::projective(3), Sector::Closed, 1, 2, 2, {}};
    const auto integrand = closed_integrand(spec);
    CHECK(iterated_residue(integrand, default_radii(1, Sector::Closed)) == 1);
    CHECK(iterated_residue(integrand, default_radii(1, Sector::Closed), {1, 0}) == 1);
    CHECK_THROWS_AS(iterated_residue(integrand, default_radii(1, Sector::Closed), {0, 0}), UsageError);
}

TEST_CASE("homogeneity and dump")
{
    auto v = residue_varspace(2);
    FactoredRational f(MultiPoly::constant(v, 1));
    f.divide_by_variable(0).divide_by_variable(1);
    CHECK(f.homogeneity_degree() == -2);
    CHECK(FactoredRational(kernel_e(v, 3, 0, 1)).homogeneity_degree() == 4);
    CHECK_FALSE(FactoredRational(z(v, 0) + z(v, 1, 2)).homogeneity_degree().has_value());
    const std::string dump = f.dump();
    CHECK(dump.find("factors:") != std::string::npos);
}

TEST_CASE("degree bookkeeping on random structural integrands")
{
    std::mt19937 rng(20261016);
    int nonzero = 0;
    for (int t = 0; t < 60; ++t) {
        const int d = 1 + t % 3;
        const auto f = random_structural(d, rng);
        const auto profile = default_radii(d, Sector::Closed);
        const auto deg = f.homogeneity_degree();
        REQUIRE(deg.has_value());
        const auto r = residue_stage(f, 0, profile);
        if (!r.is_zero()) {
            CHECK(r.homogeneity_degree() == *deg + 1);
            for (const auto &fac : r.denominator()) CHECK(fac.form.size() == f.vars()->size());
        }
        const BigRational v = iterated_residue(f, profile);
        if (*deg != -(d + 1)) CHECK(v == 0);
        if (v != 0) ++nonzero;
        std::vector<std::size_t> random_order(static_cast<std::size_t>(d + 1));
        std::iota(random_order.begin(), random_order.end(), 0);
        std::shuffle(random_order.begin(), random_order.end(), rng);
        CHECK(iterated_residue(f, profile, descending(static_cast<std::size_t>(d + 1))) == v);
        CHECK(iterated_residue_retrying(f, profile, Sector::Closed, 8, random_order) == v);
    }
    MESSAGE("nonzero samples: " << nonzero);
}
