#include "verify.hpp"

#include "vsc/errors.hpp"
#include "vsc/iritani.hpp"
#include "vsc/localization.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace vsc::cli {

namespace {

const Model kCP2 = Model::projective(3);
const Model kM89 = Model::hypersurface(8, 9);

HalfInt half(int twice)
{
    return HalfInt::halves(twice);
}

bool has_open_sector(const Model &m)
{
    return m.is_hypersurface() ? m.k % 2 == 1 : m.N == 3;
}

int default_max_d(const Model &m)
{
    return m.N >= 7 ? 2 : 3;
}

InsertionProfile random_insertions(std::mt19937 &rng, int jmax, int budget)
{
    InsertionProfile ins;
    if (jmax < 2) return ins;
    std::uniform_int_distribution<int> cls(2, jmax), stop(0, 3);
    while (budget > 0 && stop(rng) != 0) {
        const int j = cls(rng);
        if (j - 1 > budget) break;
        ++ins[j];
        budget -= j - 1;
    }
    return ins;
}

// Counts failures of a per-sample predicate and keeps the first few keys.
struct Tally {
    explicit Tally(std::string n) : name(std::move(n)) {}

    std::string name;
    int samples = 0;
    std::vector<std::string> failures;

    void record(bool ok, const std::string &key)
    {
        ++samples;
        if (!ok && failures.size() < 10) failures.push_back(key);
        if (!ok) ++failed;
    }
    Check check() const
    {
        return {name, failed == 0 && samples > 0, {{"samples", samples}, {"failed", failed}, {"examples", failures}}};
    }
    int failed = 0;
};

SuiteReport axioms(const SuiteOptions &opts, MirrorEngine &engine)
{
    const Model model = opts.model.value_or(kCP2);
    Evaluator &ev = engine.evaluator();
    std::mt19937 rng(opts.seed);
    SuiteReport r{"axioms", {}};
    const int max_d = default_max_d(model);

    if (!opts.sector || *opts.sector == Sector::Closed) {
        Tally puncture{"closed/puncture"}, divisor{"closed/divisor"}, symmetry{"closed/endpoint-symmetry"};
        int nonzero = 0;
        for (int t = 0; t < opts.samples; ++t) {
            const CorrelatorSpec s = random_closed_on_locus(model, max_d, rng);
            const BigRational v = ev.value(s);
            nonzero += v != 0;
            CorrelatorSpec p = s;
            ++p.insertions[0];
            puncture.record(evaluate_ignoring_selection(p) == 0, s.key());
            CorrelatorSpec dv = s;
            ++dv.insertions[1];
            divisor.record(ev.value(dv) == s.d * v, s.key());
            CorrelatorSpec sw = s;
            std::swap(sw.a, sw.b);
            symmetry.record(ev.value(sw) == v, s.key());
        }
        for (const Tally *t : {&puncture, &divisor, &symmetry}) r.checks.push_back(t->check());
        r.checks.push_back({"closed/nonzero-samples", nonzero > 0, {{"nonzero", nonzero}}});
    }
    if ((!opts.sector && has_open_sector(model)) || (opts.sector && *opts.sector == Sector::Open)) {
        Tally divisor{"open/divisor"};
        int nonzero = 0;
        for (int t = 0; t < opts.samples; ++t) {
            const CorrelatorSpec s = random_open_on_locus(model, max_d, 1, rng);
            const BigRational v = ev.value(s);
            nonzero += v != 0;
            CorrelatorSpec dv = s;
            ++dv.insertions[1];
            divisor.record(ev.value(dv) == ratio(2 * s.d - 1, 2) * v, s.key());
        }
        r.checks.push_back(divisor.check());
        r.checks.push_back({"open/nonzero-samples", nonzero > 0, {{"nonzero", nonzero}}});
    }
    return r;
}

// Published specs whose integrands are evaluated under every nesting order.
std::vector<CorrelatorSpec> golden_specs()
{
    return {
        {kCP2, Sector::Closed, 1, 2, 2, {}},
        {kCP2, Sector::Closed, 2, 2, 2, {{2, 3}}},
        {kCP2, Sector::Closed, 3, 2, 2, {{2, 6}}},
        {kCP2, Sector::Closed, 1, 0, 0, {{2, 4}}},
        {kM89, Sector::Closed, 1, 1, 1, {{3, 1}}},
        {kM89, Sector::Closed, 2, 1, 2, {}},
        {kCP2, Sector::Open, 1, 2, 0, {}},
        {kCP2, Sector::Open, 2, 2, 0, {{2, 3}}},
        {kCP2, Sector::Open, 3, 2, 0, {{2, 6}}},
        {kM89, Sector::Open, 1, 0, 0, {{3, 1}}},
        {kM89, Sector::Open, 2, 1, 0, {}},
        {kM89, Sector::Open, 3, 0, 0, {}},
    };
}

SuiteReport order_independence(const SuiteOptions &, MirrorEngine &)
{
    SuiteReport r{"order", {}};
    for (const CorrelatorSpec &s : golden_specs()) {
        const std::size_t n = static_cast<std::size_t>(s.sector == Sector::Closed ? s.d + 1 : s.d);
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        const BigRational base = evaluate_ignoring_selection(s);
        int orders = 0;
        std::vector<std::string> bad;
        do {
            ++orders;
            if (evaluate_ignoring_selection(s, order) != base) {
                std::string o;
                for (auto i : order) o += std::to_string(i);
                bad.push_back(o);
            }
        } while (std::next_permutation(order.begin(), order.end()));
        r.checks.push_back({s.key(), bad.empty(), {{"value", to_string(base)}, {"orders", orders}, {"failed", bad}}});
    }
    return r;
}

SuiteReport selection(const SuiteOptions &opts, MirrorEngine &)
{
    const Model model = opts.model.value_or(kCP2);
    const int dim = model.dim();
    SuiteReport r{"selection", {}};
    if (!opts.sector || *opts.sector == Sector::Closed) {
        Tally off{"closed/off-locus-vanishes"};
        for (int d = 1; d <= 2; ++d)
            for (int a = 0; a <= dim; ++a)
                for (int b = a; b <= dim; ++b)
                    for (int w = 0; w <= 3; ++w)
                        for (const auto &ins : insertion_lattice(w, dim, 0)) {
                            const CorrelatorSpec s{model, Sector::Closed, d, a, b, ins};
                            if (selection_closed(s)) continue;
                            off.record(evaluate_ignoring_selection(s) == 0, s.key());
                        }
        r.checks.push_back(off.check());
    }
    if ((!opts.sector && has_open_sector(model)) || (opts.sector && *opts.sector == Sector::Open)) {
        Tally off{"open/off-locus-vanishes"};
        for (int d = 1; d <= 2; ++d)
            for (int a = 0; a <= dim; ++a)
                for (int w = 0; w <= 3; ++w)
                    for (const auto &ins : insertion_lattice(w, dim, 0)) {
                        const CorrelatorSpec s{model, Sector::Open, d, a, 0, ins};
                        if (selection_open(s)) continue;
                        off.record(evaluate_ignoring_selection(s) == 0, s.key());
                    }
        r.checks.push_back(off.check());
    }
    return r;
}

SuiteReport integrability(const SuiteOptions &opts, MirrorEngine &engine)
{
    SuiteReport r{"integrability", {}};
    if (!opts.sector || *opts.sector == Sector::Closed) {
        for (const auto &[model, J, dmax] : {std::tuple{kCP2, 2, 4}, std::tuple{kM89, 6, 2}}) {
            const int dim = model.dim();
            int pairs = 0;
            std::vector<std::string> bad;
            for (int c = 0; c <= dim; ++c)
                for (int a = 0; a <= dim; ++a)
                    for (int b = a + 1; b <= dim; ++b) {
                        const GradedSeries bc = engine.gw_closed(model, b, c, HalfInt::from_int(dmax), J);
                        const GradedSeries ac = engine.gw_closed(model, a, c, HalfInt::from_int(dmax), J);
                        ++pairs;
                        if (!(bc.derivative(a) == ac.derivative(b)))
                            bad.push_back(std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c));
                    }
            r.checks.push_back({"closed/" + model.key(), bad.empty(), {{"triples", pairs}, {"failed", bad}}});
        }
    }
    if (!opts.sector || *opts.sector == Sector::Open) {
        const auto cp_policy = OpenTruncationPolicy::for_target(half(5), 3);
        const GradedSeries o2 = engine.gw_open(kCP2, 2, half(5), cp_policy);
        const GradedSeries o1 = engine.gw_open(kCP2, 1, half(5), cp_policy);
        r.checks.push_back({"open/cp:3 d/dt2<O_h> = d/dt1<O_h2> at t0=0",
                            (o1.derivative(2) - o2.derivative(1)).slice_zero(0).is_zero(),
                            {{"dmax", "5/2"}}});
        auto m_policy = OpenTruncationPolicy::for_target(half(5), 6);
        m_policy.unit_extra = 1;
        const GradedSeries oh = engine.gw_open(kM89, 1, half(5), m_policy);
        const GradedSeries ou = engine.gw_open(kM89, 0, half(5), m_policy);
        r.checks.push_back({"open/hyp:8:9 d/dt0<O_h> = d/dt1<O_1> at t0=0",
                            (oh.derivative(0) - ou.derivative(1)).slice_zero(0).is_zero(),
                            {{"dmax", "5/2"}}});
    }
    return r;
}

SuiteReport oracle(const SuiteOptions &, MirrorEngine &engine)
{
    SuiteReport r{"oracle", {}};
    for (int d = 1; d <= 3; ++d) {
        const BigRational mirror = cp2_maximal_disk_invariant(engine, d);
        const BigRational local = disk_invariant_localization(4, 1, d, {{2, 3 * d - 2}});
        r.checks.push_back({"cp:3 <(O_h2)^" + std::to_string(3 * d - 2) + ">_disk," + std::to_string(2 * d - 1),
                            mirror == local, {{"mirror", to_string(mirror)}, {"localization", to_string(local)}}});
    }
    auto policy = OpenTruncationPolicy::for_target(half(5), 6);
    policy.unit_extra = 1;
    struct Case {
        int front;
        int d;
        InsertionProfile rest;
        const char *label;
    };
    const Case cases[] = {
        {1, 1, {{2, 1}}, "<O_h O_h2>_disk,1"},       {0, 1, {{3, 1}}, "<O_1 O_h3>_disk,1"},
        {0, 1, {{2, 2}}, "<O_1 (O_h2)^2>_disk,1"},   {0, 2, {{2, 1}}, "<O_1 O_h2>_disk,3"},
        {1, 2, {}, "<O_h>_disk,3"},                  {0, 3, {}, "<O_1>_disk,5"},
    };
    std::map<int, GradedSeries> gw;
    for (const Case &c : cases) {
        if (!gw.count(c.front)) gw.emplace(c.front, engine.gw_open(kM89, c.front, half(5), policy));
        InsertionProfile all = c.rest;
        ++all[c.front];
        const BigRational mirror = extract_gw(gw.at(c.front), half(2 * c.d - 1), c.rest);
        const BigRational local = disk_invariant_localization(8, 9, c.d, all);
        r.checks.push_back({std::string("hyp:8:9 ") + c.label, mirror == local,
                            {{"mirror", to_string(mirror)}, {"localization", to_string(local)}}});
    }
    return r;
}

SuiteReport gmt(const SuiteOptions &, MirrorEngine &engine)
{
    SuiteReport r{"gmt", {}};
    for (int d = 1; d <= 3; ++d) {
        const int a = (5 - d) / 2, b = 5 - d - a;
        const GmtReport g = gmt_check_closed(engine, kM89, d, a, b);
        r.checks.push_back({"closed d=" + std::to_string(d), g.equal, nlohmann::json::parse(g.to_json())});
    }
    const int open_a[] = {2, 1, 0};
    for (int d = 1; d <= 3; ++d) {
        const GmtReport g = gmt_check_open(engine, kM89, d, open_a[d - 1]);
        r.checks.push_back({"open d=" + std::to_string(d), g.equal, nlohmann::json::parse(g.to_json())});
    }
    return r;
}

SuiteReport iritani(const SuiteOptions &, MirrorEngine &engine)
{
    SuiteReport r{"iritani", {}};
    const IritaniBox box;
    try {
        const auto [minus, plus] = birkhoff(build_loop_matrix(box), box);
        const ConnectionMatrix c = connection_matrix(minus, box);
        r.checks.push_back({"connection matrix is z-free", true, {{"n_max", box.n_max}, {"m_max", box.m_max}}});
        r.checks.push_back({"(C1)12 = (C1)23", c[0][1] == c[1][2], nlohmann::json::object()});
    } catch (const RepresentationError &e) {
        r.checks.push_back({"connection matrix is z-free", false, {{"error", e.what()}}});
    }
    const IritaniResult res = iritani_pipeline(box, engine);
    const auto report = nlohmann::json::parse(res.report);
    r.checks.push_back({"observables equal the quasimap GW series", res.observables_match, report["observables"]});
    r.checks.push_back({"mirror maps differ", res.mirror_maps_differ, report["mirror_map"]});
    return r;
}

SuiteReport stability(const SuiteOptions &, MirrorEngine &engine)
{
    SuiteReport r{"stability", {}};
    std::map<int, BigRational> baseline;
    for (int j_max = 3; j_max <= 4; ++j_max)
        for (int extra = 0; extra <= 1; ++extra) {
            auto policy = OpenTruncationPolicy::for_target(half(5), j_max);
            policy.unit_extra = extra;
            const GradedSeries o2 = engine.gw_open(kCP2, 2, half(5), policy);
            nlohmann::json values;
            bool same = true;
            for (int d = 1; d <= 3; ++d) {
                const BigRational v = extract_gw(o2, half(2 * d - 1), {{2, 3 * d - 3}});
                baseline.try_emplace(d, v);
                same = same && v == baseline.at(d);
                values[std::to_string(d)] = to_string(v);
            }
            r.checks.push_back({"cp:3 J_max=" + std::to_string(j_max) + " unit_extra=" + std::to_string(extra), same,
                                values});
        }
    return r;
}

SuiteReport quadrature(const SuiteOptions &, MirrorEngine &engine)
{
    SuiteReport r{"quadrature", {}};
    for (int d = 1; d <= 2; ++d)
        for (int a = 0; a <= 2; ++a)
            for (int b = a; b <= 2; ++b) {
                const int m = 3 * (d + 1) - 2 - a - b;
                if (m < 0) continue;
                CorrelatorSpec s{kCP2, Sector::Closed, d, a, b, {}};
                if (m > 0) s.insertions[2] = m;
                const BigRational exact = engine.evaluator().value(s);
                const QuadratureResult q = contour_quadrature({closed_integrand(s), steep_radii(d), 32, 40, {}, 1});
                const BigFloat ex = BigFloat(exact.get_num_mpz_t()) / BigFloat(exact.get_den_mpz_t());
                const BigFloat diff = abs(q.real - ex);
                const bool ok = q.converged && q.error < BigFloat("1e-15") && diff < q.error;
                r.checks.push_back({s.key(), ok,
                                    {{"exact", to_string(exact)},
                                     {"difference", diff.str(6, std::ios::scientific)},
                                     {"error", q.error.str(6, std::ios::scientific)}}});
            }
    return r;
}

using SuiteFn = std::function<SuiteReport(const SuiteOptions &, MirrorEngine &)>;

const std::vector<std::pair<std::string, SuiteFn>> &suites()
{
    static const std::vector<std::pair<std::string, SuiteFn>> all{
        {"axioms", axioms},       {"order", order_independence}, {"selection", selection},
        {"integrability", integrability}, {"oracle", oracle},   {"gmt", gmt},
        {"iritani", iritani},     {"stability", stability},   {"quadrature", quadrature},
    };
    return all;
}

} // namespace

bool SuiteReport::pass() const
{
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass; });
}

nlohmann::json SuiteReport::to_json() const
{
    nlohmann::json j{{"suite", suite}, {"pass", pass()}, {"checks", nlohmann::json::array()}};
    for (const Check &c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return j;
}

const std::vector<std::string> &suite_names()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto &[name, fn] : suites()) n.push_back(name);
        return n;
    }();
    return names;
}

SuiteReport run_suite(const std::string &name, const SuiteOptions &opts, MirrorEngine &engine)
{
    for (const auto &[n, fn] : suites())
        if (n == name) return fn(opts, engine);
    throw UsageError("unknown suite '" + name + "'");
}

CorrelatorSpec random_closed_on_locus(const Model &m, int max_d, std::mt19937 &rng)
{
    std::uniform_int_distribution<int> deg(1, max_d);
    const int d = deg(rng);
    const int rhs = m.is_hypersurface() ? d * (m.N - m.k) + m.N - 3 : m.N * (d + 1) - 2;
    const int dim = m.dim();
    CorrelatorSpec s{m, Sector::Closed, d, 0, 0, {}};
    for (int attempt = 0; attempt < 100; ++attempt) {
        s.insertions = random_insertions(rng, dim, std::max(0, rhs));
        const int rest = rhs - insertion_weight(s.insertions);
        if (rest < 0 || rest > 2 * dim) continue;
        std::uniform_int_distribution<int> split(std::max(0, rest - dim), std::min(dim, rest));
        s.a = split(rng);
        s.b = rest - s.a;
        return s;
    }
    s.insertions.clear();
    s.a = std::clamp(rhs, 0, dim);
    s.b = std::clamp(rhs - s.a, 0, dim);
    return s;
}

CorrelatorSpec random_open_on_locus(const Model &m, int max_d, int max_units, std::mt19937 &rng)
{
    std::uniform_int_distribution<int> deg(1, max_d), units(0, max_units);
    const int d = deg(rng);
    const int rhs = m.is_hypersurface() ? (m.N - m.k) * d + (m.k - 3) / 2 : 3 * d - 1;
    CorrelatorSpec s{m, Sector::Open, d, 0, 0, {}};
    // Negative rhs (general type, large d) is only reachable with O_1 insertions.
    const int u = std::max(units(rng), -rhs);
    for (int attempt = 0; attempt < 100; ++attempt) {
        s.insertions = random_insertions(rng, m.dim(), std::max(0, rhs + u));
        if (u) s.insertions[0] = u;
        const int a = rhs - insertion_weight(s.insertions);
        if (a < 0 || a > m.dim()) continue;
        s.a = a;
        return s;
    }
    s.insertions = {};
    s.a = std::clamp(rhs, 0, m.dim());
    return s;
}

BigRational evaluate_ignoring_selection(const CorrelatorSpec &s, std::vector<std::size_t> order)
{
    const auto f = s.sector == Sector::Closed ? closed_integrand(s) : open_integrand(s);
    return iterated_residue_retrying(f, default_radii(s.d, s.sector), s.sector, 8, std::move(order));
}

} // namespace vsc::cli
