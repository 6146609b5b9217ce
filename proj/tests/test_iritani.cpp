#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_main.hpp"
#include "vsc/errors.hpp"
#include "vsc/iritani.hpp"

#include <json.hpp>

#include <random>

using namespace vsc;

namespace {

HalfInt deg(int d)
{
    return HalfInt::from_int(d);
}

const IritaniBox kBox{};

struct Pipeline {
    LoopMatrix M, minus, plus;
    ConnectionMatrix C;
};

const Pipeline &pipeline()
{
    static const Pipeline p = [] {
        LoopMatrix M = build_loop_matrix(kBox);
        auto [minus, plus] = birkhoff(M, kBox);
        ConnectionMatrix C = connection_matrix(minus, kBox);
        return Pipeline{std::move(M), std::move(minus), std::move(plus), std::move(C)};
    }();
    return p;
}

const IritaniResult &result()
{
    static Evaluator ev({8, 1});
    static MirrorEngine engine(ev);
    static const IritaniResult r = iritani_pipeline(kBox, engine);
    return r;
}

LaurentZ lz(std::initializer_list<std::pair<const int, BigRational>> terms)
{
    return LaurentZ(terms);
}

} // namespace

TEST_CASE("I-function coefficients")
{
    const NilpotentLaurent c00 = i_coeff(0, 0);
    CHECK(c00.h[0] == lz({{0, 1}}));
    CHECK(c00.h[1].empty());
    CHECK(c00.h[2].empty());

    const NilpotentLaurent c10 = i_coeff(1, 0);
    CHECK(c10.h[0] == lz({{-3, 1}}));
    CHECK(c10.h[1] == lz({{-4, -3}}));
    CHECK(c10.h[2] == lz({{-5, 6}}));

    const NilpotentLaurent c01 = i_coeff(0, 1);
    CHECK(c01.h[0].empty());
    CHECK(c01.h[1].empty());
    CHECK(c01.h[2] == lz({{-1, 1}}));

    // (0, m): h^2 (m-1)!^2 z^{m-2} / m!
    CHECK(i_coeff(0, 3).h[2] == lz({{1, Q("2/3")}}));
    CHECK_THROWS_AS(i_coeff(-1, 0), UsageError);
}

TEST_CASE("loop matrix structure")
{
    const LoopMatrix &M = pipeline().M;
    Matrix3 id;
    for (int i = 0; i < 3; ++i) id[i][i][0] = 1;
    CHECK(M.at({0, 0}) == id);

    // (1, 0) is purely negative in z; positive powers first appear at (0, 3).
    auto powers = [&](Bidegree b) {
        std::pair<int, int> range{1000, -1000};
        for (const auto &row : M.at(b))
            for (const auto &e : row)
                for (const auto &[p, c] : e) {
                    range.first = std::min(range.first, p);
                    range.second = std::max(range.second, p);
                }
        return range;
    };
    CHECK(powers({1, 0}).second < 0);
    CHECK(powers({0, 3}).second > 0);
    CHECK(powers({0, 3}).first == 1);

    // Column c is (h + n z)^c times the I-function sector.
    const Matrix3 &m10 = M.at({1, 0});
    CHECK(m10[0][1] == lz({{-2, 1}}));
    CHECK(m10[0][2] == lz({{-1, 1}}));
    CHECK(m10[2][2] == lz({{-3, 1}}));
}

TEST_CASE("Birkhoff examples")
{
    const IritaniBox tiny{1, 1};
    Matrix3 id;
    for (int i = 0; i < 3; ++i) id[i][i][0] = 1;

    LoopMatrix identity{{{0, 0}, id}};
    auto [m1, p1] = birkhoff(identity, tiny);
    CHECK(m1 == identity);
    CHECK(p1 == identity);

    LoopMatrix single{{{0, 0}, id}};
    Matrix3 e;
    e[0][1] = lz({{-1, 1}, {0, 1}, {1, 1}});
    single[{1, 0}] = e;
    auto [m2, p2] = birkhoff(single, tiny);
    CHECK(m2.at({1, 0})[0][1] == lz({{-1, 1}}));
    CHECK(p2.at({1, 0})[0][1] == lz({{0, 1}, {1, 1}}));

    LoopMatrix broken{{{0, 0}, e}};
    CHECK_THROWS_AS(birkhoff(broken, tiny), UsageError);
}

TEST_CASE("Birkhoff factorization invariants")
{
    const Pipeline &p = pipeline();
    CHECK(loop_product(p.minus, p.plus, kBox) == p.M);
    for (const auto &[b, m] : p.minus) {
        if (b == Bidegree{}) continue;
        for (const auto &row : m)
            for (const auto &e : row)
                for (const auto &[power, c] : e) CHECK(power <= -1);
    }
    for (const auto &[b, m] : p.plus) {
        if (b == Bidegree{}) continue;
        for (const auto &row : m)
            for (const auto &e : row)
                for (const auto &[power, c] : e) CHECK(power >= 0);
    }
}

TEST_CASE("factorization of random loops")
{
    // Property: M_- M_+ = M for random loops with identity at (0, 0).
    std::mt19937 rng(20261016);
    std::uniform_int_distribution<int> coeff(-4, 4), power(-3, 3);
    const IritaniBox box{2, 2};
    for (int trial = 0; trial < 20; ++trial) {
        LoopMatrix M;
        Matrix3 id;
        for (int i = 0; i < 3; ++i) id[i][i][0] = 1;
        M[{0, 0}] = id;
        for (int n = 0; n <= 2; ++n)
            for (int m = 0; m <= 2; ++m) {
                if (n == 0 && m == 0) continue;
                Matrix3 x;
                for (auto &row : x)
                    for (auto &entry : row)
                        for (int t = 0; t < 2; ++t) {
                            const int c = coeff(rng);
                            if (c != 0) entry[power(rng)] += c;
                        }
                for (auto &row : x)
                    for (auto &entry : row) std::erase_if(entry, [](const auto &kv) { return kv.second == 0; });
                M[{n, m}] = x;
            }
        auto [minus, plus] = birkhoff(M, box);
        LoopMatrix trimmed;
        for (const auto &[b, m] : M) {
            bool nonzero = false;
            for (const auto &row : m)
                for (const auto &e : row) nonzero = nonzero || !e.empty();
            if (nonzero) trimmed[b] = m;
        }
        CHECK(loop_product(minus, plus, box) == trimmed);
    }
}

TEST_CASE("connection matrix")
{
    const ConnectionMatrix &C = pipeline().C;
    const GradedSeries &c11 = C[0][0];
    CHECK(c11.coefficient(deg(1), {{2, 2}}) == Q("-1/2"));
    CHECK(c11.coefficient(deg(2), {{2, 5}}) == Q("13/15"));
    CHECK(c11.coefficient(deg(3), {{2, 8}}) == Q("-3167/840"));
    CHECK(c11.coefficient(deg(4), {{2, 11}}) == Q("44552/2079"));
    CHECK(c11.coefficient(deg(5), {{2, 14}}) == Q("-450037373/3243240"));

    const GradedSeries &c21 = C[1][0];
    CHECK(c21.coefficient(deg(0), {}) == 1);
    CHECK(c21.coefficient(deg(1), {{2, 3}}) == Q("1/6"));
    CHECK(c21.coefficient(deg(2), {{2, 6}}) == Q("-11/15"));
    CHECK(c21.coefficient(deg(3), {{2, 9}}) == Q("229/56"));
    CHECK(c21.coefficient(deg(4), {{2, 12}}) == Q("-775267/29700"));
    CHECK(c21.coefficient(deg(5), {{2, 15}}) == Q("233170937/1289925"));

    const GradedSeries &c31 = C[2][0];
    CHECK(c31.coefficient(deg(1), {{2, 4}}) == Q("-5/12"));
    CHECK(c31.coefficient(deg(2), {{2, 7}}) == Q("1241/630"));
    CHECK(c31.coefficient(deg(3), {{2, 10}}) == Q("-47977/4200"));
    CHECK(c31.coefficient(deg(4), {{2, 13}}) == Q("201402797/2702700"));
    CHECK(c31.coefficient(deg(5), {{2, 16}}) == Q("-475054027589/908107200"));

    CHECK(c11.size() == 5);
    CHECK(c21.size() == 6);
    CHECK(c31.size() == 5);
    CHECK(C[0][1] == C[1][2]);
}

TEST_CASE("mirror map from the connection matrix")
{
    const FormalMap &m = result().mirror;
    const GradedSeries t0 = m.component(0), t1 = m.component(1), t2 = m.component(2);
    CHECK(t0.coefficient(deg(0), {{0, 1}}) == 1);
    CHECK(t0.coefficient(deg(1), {{2, 2}}) == Q("-1/2"));
    CHECK(t0.coefficient(deg(2), {{2, 5}}) == Q("13/30"));
    CHECK(t0.coefficient(deg(3), {{2, 8}}) == Q("-3167/2520"));
    CHECK(t0.coefficient(deg(4), {{2, 11}}) == Q("11138/2079"));
    CHECK(t0.coefficient(deg(5), {{2, 14}}) == Q("-450037373/16216200"));

    CHECK(t1.coefficient(deg(0), {{1, 1}}) == 1);
    CHECK(t1.coefficient(deg(1), {{2, 3}}) == Q("1/6"));
    CHECK(t1.coefficient(deg(2), {{2, 6}}) == Q("-11/30"));
    CHECK(t1.coefficient(deg(3), {{2, 9}}) == Q("229/168"));
    CHECK(t1.coefficient(deg(4), {{2, 12}}) == Q("-775267/118800"));
    CHECK(t1.coefficient(deg(5), {{2, 15}}) == Q("233170937/6449625"));

    CHECK(t2.coefficient(deg(0), {{2, 1}}) == 1);
    CHECK(t2.coefficient(deg(1), {{2, 4}}) == Q("-5/12"));
    CHECK(t2.coefficient(deg(2), {{2, 7}}) == Q("1241/1260"));
    CHECK(t2.coefficient(deg(3), {{2, 10}}) == Q("-47977/12600"));
    CHECK(t2.coefficient(deg(4), {{2, 13}}) == Q("201402797/10810800"));
    CHECK(t2.coefficient(deg(5), {{2, 16}}) == Q("-475054027589/4540536000"));
}

TEST_CASE("observables before and after inversion")
{
    const IritaniResult &r = result();
    CHECK(r.f1.coefficient(deg(1), {{2, 1}}) == 1);
    CHECK(r.f1.coefficient(deg(2), {{2, 4}}) == Q("-1/6"));
    CHECK(r.f1.coefficient(deg(3), {{2, 7}}) == Q("289/630"));
    CHECK(r.f1.coefficient(deg(4), {{2, 10}}) == Q("-35873/18900"));
    CHECK(r.f1.coefficient(deg(5), {{2, 13}}) == Q("156650191/16216200"));

    CHECK(r.f2.coefficient(deg(1), {}) == 1);
    CHECK(r.f2.coefficient(deg(2), {{2, 3}}) == Q("1/3"));
    CHECK(r.f2.coefficient(deg(3), {{2, 6}}) == Q("-22/45"));
    CHECK(r.f2.coefficient(deg(4), {{2, 9}}) == Q("1261/756"));
    CHECK(r.f2.coefficient(deg(5), {{2, 12}}) == Q("-2405639/311850"));

    CHECK(r.f3.coefficient(deg(0), {{0, 1}}) == 1);
    CHECK(r.f3.coefficient(deg(2), {{2, 5}}) == Q("2/15"));
    CHECK(r.f3.coefficient(deg(3), {{2, 8}}) == Q("-613/1260"));
    CHECK(r.f3.coefficient(deg(4), {{2, 11}}) == Q("4751/2079"));
    CHECK(r.f3.coefficient(deg(5), {{2, 14}}) == Q("-101313427/8108100"));

    CHECK(r.f1_flat.coefficient(deg(1), {{2, 1}}) == 1);
    CHECK(r.f1_flat.coefficient(deg(2), {{2, 4}}) == Q("1/12"));
    CHECK(r.f1_flat.coefficient(deg(3), {{2, 7}}) == Q("1/140"));
    CHECK(r.f1_flat.coefficient(deg(4), {{2, 10}}) == Q("31/45360"));
    CHECK(r.f1_flat.coefficient(deg(5), {{2, 13}}) == Q("1559/22239360"));

    CHECK(r.f2_flat.coefficient(deg(1), {}) == 1);
    CHECK(r.f2_flat.coefficient(deg(2), {{2, 3}}) == Q("1/6"));
    CHECK(r.f2_flat.coefficient(deg(3), {{2, 6}}) == Q("1/60"));
    CHECK(r.f2_flat.coefficient(deg(4), {{2, 9}}) == Q("31/18144"));
    CHECK(r.f2_flat.coefficient(deg(5), {{2, 12}}) == Q("1559/8553600"));

    CHECK(r.f3_flat.coefficient(deg(0), {{0, 1}}) == 1);
    CHECK(r.f3_flat.coefficient(deg(1), {{2, 2}}) == Q("1/2"));
    CHECK(r.f3_flat.coefficient(deg(2), {{2, 5}}) == Q("1/30"));
    CHECK(r.f3_flat.coefficient(deg(3), {{2, 8}}) == Q("3/1120"));
    CHECK(r.f3_flat.coefficient(deg(4), {{2, 11}}) == Q("31/124740"));
    CHECK(r.f3_flat.coefficient(deg(5), {{2, 14}}) == Q("1559/62270208"));
    CHECK(r.f3_flat.size() == 6);
}

TEST_CASE("comparison with the quasimap pipeline")
{
    const IritaniResult &r = result();
    CHECK(r.observables_match);
    CHECK(r.mirror_maps_differ);

    const auto report = nlohmann::json::parse(r.report);
    CHECK(report["observables_match"] == true);
    CHECK(report["mirror_maps_differ"] == true);
    bool found = false;
    for (const auto &row : report["mirror_map"]["t2"]) {
        if (row["term"] == "y2^4 q") {
            found = true;
            CHECK(row["quasimap"] == "1/4");
            CHECK(row["iritani"] == "-5/12");
            CHECK(row["equal"] == false);
        }
    }
    CHECK(found);
    for (const auto &name : {"f1", "f2", "f3"})
        for (const auto &row : report["observables"][name]) CHECK(row["equal"] == true);
}

TEST_CASE("pipeline preconditions")
{
    Evaluator ev({8, 1});
    MirrorEngine engine(ev);
    CHECK_THROWS_AS(iritani_pipeline({0, 4}, engine), UsageError);
}
