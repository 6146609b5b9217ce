#ifndef VSC_LOCALIZATION_HPP
#define VSC_LOCALIZATION_HPP

#include "vsc/model.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <vector>

namespace vsc {

// ⟨Π O_{h^j}^{m_j}⟩_{disk,2d-1} of the degree-k hypersurface in CP^{N-1} (k odd) from the localization
// residue sums, for d <= 3. CP^2 is N = 4, k = 1. The profile lists every operator, including the first.
BigRational disk_invariant_localization(int N, int k, int d, const InsertionProfile &insertions);

using BigFloat = boost::multiprecision::mpfr_float;

struct QuadratureSpec {
    FactoredRational integrand;
    RadiusProfile profile;
    int points = 64; // per circle, power of two, >= 8
    int digits = 50;
    // Nesting order of the circles, outermost first; ascending when empty.
    std::vector<std::size_t> order;
    unsigned threads = 1;
};

struct QuadratureResult {
    BigFloat real;
    BigFloat imag;
    // |V_n - V_{n/2}|, floored at the working precision.
    BigFloat error;
    // False if halving the grid did not shrink the error.
    bool converged = false;
    int points = 0;
    int digits = 0;

    std::string to_json() const;
};

// Closed-sector profile r_j = 1 + 16j(d-j); strongly concave, so the trapezoidal rule converges fast.
RadiusProfile steep_radii(int d);

// Nested trapezoidal rule for (2πi)^{-n} ∮...∮ f over the polycircle |z_j| = r_j.
// Throws UsageError when a denominator can vanish on the polycircle.
QuadratureResult contour_quadrature(const QuadratureSpec &spec);

} // namespace vsc

#endif
