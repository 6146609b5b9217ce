#ifndef VSC_FORMAL_MAP_HPP
#define VSC_FORMAL_MAP_HPP

#include "vsc/graded_series.hpp"

#include <vector>

namespace vsc {

// Coordinate change t^j = x^j + shift_j(q, x) with every shift of q-degree >= 1/2.
// If the log class is present, its shift also rescales q: Q = q · exp(shift_1).
class FormalMap {
public:
    // shifts[i] belongs to classes[i]; each must be over the same classes and bound.
    FormalMap(std::vector<int> classes, HalfInt dmax, std::vector<GradedSeries> shifts);
    static FormalMap identity(std::vector<int> classes, HalfInt dmax);
    // Build from full components t^j (each containing the monomial x^j).
    static FormalMap from_components(std::vector<int> classes, HalfInt dmax, const std::vector<GradedSeries> &components);

    const std::vector<int> &classes() const { return classes_; }
    HalfInt dmax() const { return dmax_; }
    const GradedSeries &shift(int j) const;
    GradedSeries component(int j) const;

private:
    std::vector<int> classes_;
    HalfInt dmax_;
    std::vector<GradedSeries> shifts_;
};

// Substitute x^j -> x^j + shift_j (and q -> q·exp(shift_1)) into s.
// The result lives over m's classes; valid up to min(s.dmax, m.dmax + lowest q-degree of s).
GradedSeries series_compose(const GradedSeries &s, const FormalMap &m);

// Inverse map by fixed-point iteration x <- t - (m(x) - x).
FormalMap invert_formal_map(const FormalMap &m);

} // namespace vsc

#endif
