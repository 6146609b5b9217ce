#include "vsc/formal_map.hpp"

#include "vsc/errors.hpp"

#include <algorithm>
#include <map>

namespace vsc {

FormalMap::FormalMap(std::vector<int> classes, HalfInt dmax, std::vector<GradedSeries> shifts)
    : classes_(std::move(classes)), dmax_(dmax), shifts_(std::move(shifts))
{
    if (shifts_.size() != classes_.size()) throw UsageError("one shift per class required");
    for (auto &s : shifts_) {
        if (s.classes() != classes_) throw UsageError("shift over different couplings");
        if (s.dmax() < dmax_) throw UsageError("shift truncated below the map bound");
        s = s.truncated(dmax_);
        if (!s.is_zero() && s.min_degree().twice == 0)
            throw ContractError("formal map is not the identity at q = 0");
    }
}

FormalMap FormalMap::identity(std::vector<int> classes, HalfInt dmax)
{
    std::vector<GradedSeries> shifts(classes.size(), GradedSeries(classes, dmax));
    return FormalMap(std::move(classes), dmax, std::move(shifts));
}

FormalMap FormalMap::from_components(std::vector<int> classes, HalfInt dmax,
                                     const std::vector<GradedSeries> &components)
{
    if (components.size() != classes.size()) throw UsageError("one component per class required");
    std::vector<GradedSeries> shifts;
    for (std::size_t i = 0; i < classes.size(); ++i)
        shifts.push_back(components[i] - GradedSeries::coupling(classes, components[i].dmax(), classes[i]));
    return FormalMap(std::move(classes), dmax, std::move(shifts));
}

const GradedSeries &FormalMap::shift(int j) const
{
    auto it = std::lower_bound(classes_.begin(), classes_.end(), j);
    if (it == classes_.end() || *it != j) throw UsageError("class not in formal map");
    return shifts_[static_cast<std::size_t>(it - classes_.begin())];
}

GradedSeries FormalMap::component(int j) const
{
    return GradedSeries::coupling(classes_, dmax_, j) + shift(j);
}

GradedSeries series_compose(const GradedSeries &s, const FormalMap &m)
{
    for (int j : s.classes())
        if (!std::binary_search(m.classes().begin(), m.classes().end(), j))
            throw UsageError("formal map does not cover coupling x" + std::to_string(j));
    const GradedSeries src = s.embedded(m.classes());
    HalfInt bound = s.dmax();
    if (!s.is_zero()) bound = std::min(bound, m.dmax() + s.min_degree());
    const std::size_t n = m.classes().size();
    const bool has_log = std::binary_search(m.classes().begin(), m.classes().end(), kLogClass);

    // Substituted couplings and cached powers.
    std::vector<std::vector<GradedSeries>> powers(n);
    std::vector<unsigned> max_exp(n, 0);
    for (const auto &[k, c] : src.terms())
        for (std::size_t i = 0; i < n; ++i) max_exp[i] = std::max(max_exp[i], k.x[i]);
    for (std::size_t i = 0; i < n; ++i) {
        const int j = m.classes()[i];
        GradedSeries sub = m.component(j).truncated(bound);
        powers[i].push_back(GradedSeries::constant(m.classes(), bound, 1));
        for (unsigned e = 1; e <= max_exp[i]; ++e)
            powers[i].push_back(GradedSeries::mul_truncated(powers[i].back(), sub, bound));
    }
    std::map<HalfInt, GradedSeries> rescale;

    GradedSeries result(m.classes(), bound);
    for (const auto &[k, c] : src.terms()) {
        if (k.q > bound) break;
        const HalfInt rem = bound - k.q;
        GradedSeries prod = GradedSeries::constant(m.classes(), rem, c);
        for (std::size_t i = 0; i < n && !prod.is_zero(); ++i)
            if (k.x[i] > 0) prod = GradedSeries::mul_truncated(prod, powers[i][k.x[i]].truncated(rem), rem);
        if (has_log && k.q.twice != 0 && !prod.is_zero()) {
            auto it = rescale.find(k.q);
            if (it == rescale.end())
                it = rescale.emplace(k.q, GradedSeries::exp_scaled(m.shift(kLogClass).truncated(bound), k.q.to_rational()))
                         .first;
            prod = GradedSeries::mul_truncated(prod, it->second.truncated(rem), rem);
        }
        for (const auto &[pk, pc] : prod.terms()) result.add_term(pk.q + k.q, pk.x, pc);
    }
    return result;
}

FormalMap invert_formal_map(const FormalMap &m)
{
    FormalMap inv = FormalMap::identity(m.classes(), m.dmax());
    // Each pass fixes at least one more half-step of q-degree.
    const int passes = m.dmax().twice + 2;
    for (int pass = 0; pass < passes; ++pass) {
        std::vector<GradedSeries> next;
        for (int j : m.classes()) next.push_back(series_compose(m.shift(j), inv) * BigRational(-1));
        for (auto &s : next) s = s.truncated(m.dmax());
        FormalMap candidate(m.classes(), m.dmax(), std::move(next));
        bool same = true;
        for (int j : m.classes()) same = same && candidate.shift(j) == inv.shift(j);
        inv = std::move(candidate);
        if (same) break;
    }
    return inv;
}

} // namespace vsc
