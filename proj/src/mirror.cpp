#include "vsc/mirror.hpp"

#include "vsc/errors.hpp"

#include <json.hpp>

namespace vsc {

namespace {

HalfInt integer_part(HalfInt dmax)
{
    return HalfInt::from_int(dmax.floor());
}

BigRational two_point_weight(Evaluator &ev, const Model &model, int f)
{
    const CorrelatorSpec s{model, Sector::Closed, f, model.N - 3 - (model.k - model.N) * f, 0, {}};
    return ev.value(s) / model.pairing();
}

// Insertion classes h^{1+(k-N)f_j}; empty if one of them vanishes in cohomology.
std::optional<InsertionProfile> correction_insertions(const Model &model, const Partition &p)
{
    InsertionProfile ins;
    for (int part : p) {
        const int j = 1 + (model.k - model.N) * part;
        if (j < 0 || j > model.dim()) return std::nullopt;
        ++ins[j];
    }
    return ins;
}

void require_general_type(const Model &model)
{
    if (!model.is_hypersurface() || model.k <= model.N)
        throw UsageError("the correction formula is for hypersurfaces with k > N");
}

} // namespace

FormalMap mirror_map_closed(const Model &model, HalfInt dmax, int J, Evaluator &ev)
{
    const int top = std::max(J, model.dim());
    const auto classes = class_range(0, top);
    std::vector<GradedSeries> components;
    components.reserve(classes.size());
    for (int j : classes)
        components.push_back(gf_closed(model, model.dim() - j, 0, dmax, J, ev) * ratio(1, model.pairing()));
    return FormalMap::from_components(classes, dmax, components);
}

FormalMap mirror_map_open_cp2(HalfInt dmax, int J_max, Evaluator &ev)
{
    if (J_max < 3) throw UsageError("the extended map needs J_max >= 3");
    return mirror_map_closed(Model::projective(3), dmax, J_max, ev);
}

const MirrorEngine::Entry &MirrorEngine::entry(const Model &model, HalfInt dmax, int J)
{
    const std::string key = model.key() + "|" + dmax.to_string() + "|" + std::to_string(J);
    {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    FormalMap forward = mirror_map_closed(model, dmax, J, ev_);
    FormalMap inverse = invert_formal_map(forward);
    std::lock_guard lock(mutex_);
    return cache_.try_emplace(key, Entry{std::move(forward), std::move(inverse)}).first->second;
}

const FormalMap &MirrorEngine::mirror_map(const Model &model, HalfInt dmax, int J)
{
    return entry(model, dmax, J).forward;
}

const FormalMap &MirrorEngine::inverse_map(const Model &model, HalfInt dmax, int J)
{
    return entry(model, dmax, J).inverse;
}

GradedSeries MirrorEngine::gw_closed(const Model &model, int a, int b, HalfInt dmax, int J)
{
    const GradedSeries gf = gf_closed(model, a, b, dmax, J, ev_);
    return series_compose(gf, inverse_map(model, dmax, J));
}

GradedSeries MirrorEngine::gw_open(const Model &model, int a, HalfInt dmax, const OpenTruncationPolicy &policy)
{
    OpenTruncationPolicy p = policy;
    if (model.is_hypersurface()) p.j_max = model.dim();
    const GradedSeries gf = gf_open(model, a, dmax, p, ev_);
    return series_compose(gf, inverse_map(model, integer_part(dmax), p.j_max));
}

BigRational extract_gw(const GradedSeries &s, HalfInt q, const InsertionProfile &insertions)
{
    std::map<int, unsigned> e;
    BigRational mult = 1;
    for (const auto &[j, m] : insertions) {
        if (m <= 0) continue;
        e[j] = static_cast<unsigned>(m);
        mult *= BigRational(factorial(static_cast<unsigned>(m)));
    }
    return s.coefficient(q, e) * mult;
}

namespace {

void partitions_rec(int rest, int min_part, Partition &cur, std::vector<std::pair<Partition, BigRational>> &out)
{
    if (rest == 0) {
        BigRational s = 1;
        for (std::size_t i = 0; i < cur.size();) {
            std::size_t j = i;
            while (j < cur.size() && cur[j] == cur[i]) ++j;
            s /= BigRational(factorial(static_cast<unsigned>(j - i)));
            i = j;
        }
        out.emplace_back(cur, s);
        return;
    }
    for (int p = min_part; p <= rest; ++p) {
        cur.push_back(p);
        partitions_rec(rest - p, p, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<std::pair<Partition, BigRational>> partitions_with_symmetry(int f)
{
    if (f < 1) throw UsageError("partitions need f >= 1");
    std::vector<std::pair<Partition, BigRational>> out;
    Partition cur;
    partitions_rec(f, 1, cur, out);
    return out;
}

namespace {

std::vector<GmtTerm> correction_terms(Evaluator &ev, const Model &model, int d, const GradedSeries &gw,
                                      HalfInt (*grade)(int))
{
    std::vector<GmtTerm> terms;
    for (int f = 1; f <= d - 1; ++f) {
        for (const auto &[p, sym] : partitions_with_symmetry(f)) {
            GmtTerm t;
            t.f = f;
            t.partition = p;
            t.symmetry = sym;
            const auto ins = correction_insertions(model, p);
            t.invariant = ins ? extract_gw(gw, grade(d - f), *ins) : BigRational(0);
            t.weight = 1;
            for (int part : p) t.weight *= two_point_weight(ev, model, part);
            terms.push_back(std::move(t));
        }
    }
    return terms;
}

HalfInt closed_grade(int d)
{
    return HalfInt::from_int(d);
}

HalfInt disk_grade(int d)
{
    return HalfInt::halves(2 * d - 1);
}

} // namespace

GmtReport gmt_check_closed(MirrorEngine &engine, const Model &model, int d, int a, int b)
{
    require_general_type(model);
    if (d < 1) throw UsageError("degree must be >= 1");
    Evaluator &ev = engine.evaluator();
    GmtReport r;
    r.sector = Sector::Closed;
    r.model = model;
    r.d = d;
    r.a = a;
    r.b = b;
    r.lhs = ev.value({model, Sector::Closed, d, a, b, {}});
    const GradedSeries gw = engine.gw_closed(model, a, b, HalfInt::from_int(d), model.dim());
    r.invariant = extract_gw(gw, HalfInt::from_int(d), {});
    r.terms = correction_terms(ev, model, d, gw, closed_grade);
    if (const auto ins = correction_insertions(model, {d}))
        r.classical = extract_gw(gw, HalfInt{}, *ins) * two_point_weight(ev, model, d);
    r.rhs_without_classical = r.invariant;
    for (const auto &t : r.terms) r.rhs_without_classical += t.value();
    r.rhs = r.rhs_without_classical + r.classical;
    r.equal = r.lhs == r.rhs;
    return r;
}

GmtReport gmt_check_open(MirrorEngine &engine, const Model &model, int d, int a)
{
    require_general_type(model);
    if (d < 1) throw UsageError("degree must be >= 1");
    Evaluator &ev = engine.evaluator();
    GmtReport r;
    r.sector = Sector::Open;
    r.model = model;
    r.d = d;
    r.a = a;
    r.lhs = ev.value({model, Sector::Open, d, a, 0, {}});
    OpenTruncationPolicy policy;
    policy.j_max = model.dim();
    policy.target = 0;
    const GradedSeries gw = engine.gw_open(model, a, disk_grade(d), policy);
    r.invariant = extract_gw(gw, disk_grade(d), {});
    r.terms = correction_terms(ev, model, d, gw, disk_grade);
    r.rhs_without_classical = r.invariant;
    for (const auto &t : r.terms) r.rhs_without_classical += t.value();
    r.rhs = r.rhs_without_classical;
    r.equal = r.lhs == r.rhs;
    return r;
}

std::string GmtReport::to_json() const
{
    using nlohmann::json;
    json j;
    j["sector"] = sector == Sector::Closed ? "closed" : "open";
    j["model"] = model.key();
    j["d"] = d;
    j["a"] = a;
    if (sector == Sector::Closed) j["b"] = b;
    j["lhs"] = to_string(lhs);
    j["invariant"] = to_string(invariant);
    json jt = json::array();
    for (const auto &t : terms)
        jt.push_back({{"f", t.f},
                      {"partition", t.partition},
                      {"symmetry", to_string(t.symmetry)},
                      {"invariant", to_string(t.invariant)},
                      {"weight", to_string(t.weight)}});
    j["terms"] = jt;
    if (sector == Sector::Closed) j["classical"] = to_string(classical);
    j["rhs"] = to_string(rhs);
    j["equal"] = equal;
    return j.dump(2);
}

BigRational cp2_maximal_disk_invariant(MirrorEngine &engine, int d)
{
    if (d < 1) throw UsageError("cp2_maximal_disk_invariant: d must be >= 1");
    // Smaller J_max drops x^j couplings that still feed (t^2)^{3d-3} at degree 2d-1 (d >= 4).
    const HalfInt top = HalfInt::halves(2 * d - 1);
    const auto policy = OpenTruncationPolicy::for_target(top, std::max(3, d));
    const GradedSeries gw = engine.gw_open(Model::projective(3), 2, top, policy);
    return extract_gw(gw, top, {{2, 3 * d - 3}});
}

std::vector<BigInt> kontsevich_numbers(int dmax)
{
    std::vector<BigInt> n(static_cast<std::size_t>(std::max(dmax, 0)) + 1);
    if (dmax >= 1) n[1] = 1;
    for (int d = 2; d <= dmax; ++d) {
        BigInt sum = 0;
        for (int d1 = 1; d1 < d; ++d1) {
            const int d2 = d - d1;
            const BigInt c1 = binomial(3 * d - 4, 3 * d1 - 2);
            const BigInt c2 = binomial(3 * d - 4, 3 * d1 - 1);
            sum += n[d1] * n[d2] * d1 * d1 * d2 * (d2 * c1 - d1 * c2);
        }
        n[static_cast<std::size_t>(d)] = sum;
    }
    n.erase(n.begin());
    return n;
}

} // namespace vsc
