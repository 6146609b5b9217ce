#ifndef VSC_IRITANI_HPP
#define VSC_IRITANI_HPP

#include "vsc/mirror.hpp"

#include <array>
#include <compare>
#include <map>
#include <string>

namespace vsc {

// Laurent polynomial in z: power -> coefficient (no zero coefficients stored).
using LaurentZ = std::map<int, BigRational>;

// a_0 + a_1 h + a_2 h^2 with h^3 = 0.
struct NilpotentLaurent {
    std::array<LaurentZ, 3> h;
};

// Coefficient of e^{n y^1} (y^2)^m in the extended CP^2 I-function, without the exp(y^1 h / z) factor.
NilpotentLaurent i_coeff(int n, int m);

using Matrix3 = std::array<std::array<LaurentZ, 3>, 3>;

struct Bidegree {
    int n = 0; // power of e^{y^1}
    int m = 0; // power of y^2
    friend auto operator<=>(const Bidegree &, const Bidegree &) = default;
};

// Σ M_{nm}(z) e^{n y^1} (y^2)^m over the box 0 <= n <= n_max, 0 <= m <= m_max.
using LoopMatrix = std::map<Bidegree, Matrix3>;

struct IritaniBox {
    int n_max = 5;
    int m_max = 16;
    bool contains(Bidegree b) const { return b.n >= 0 && b.m >= 0 && b.n <= n_max && b.m <= m_max; }
};

// M with S = exp(y^1 h / z) · M; columns are I, z∂I, z²∂²I by h-degree.
LoopMatrix build_loop_matrix(const IritaniBox &box);

// M = M_- M_+ with M_- = 1 + (negative z-powers) and M_+ = 1 + (nonnegative z-powers).
std::pair<LoopMatrix, LoopMatrix> birkhoff(const LoopMatrix &M, const IritaniBox &box);

LoopMatrix loop_product(const LoopMatrix &a, const LoopMatrix &b, const IritaniBox &box);

using ConnectionMatrix = std::array<std::array<GradedSeries, 3>, 3>;

// C_1 = S_-^{-1} z∂_{y^1} S_- as series in q = e^{y^1} and x^j = y^j over classes {0, 1, 2}.
// Throws RepresentationError if any z-dependence survives at a computed bidegree.
ConnectionMatrix connection_matrix(const LoopMatrix &M_minus, const IritaniBox &box);

struct IritaniResult {
    FormalMap mirror;           // t^j(y) over classes {0, 1, 2}
    GradedSeries f1, f2, f3;    // in y
    GradedSeries f1_flat, f2_flat, f3_flat; // in t via the inverse map
    // Per-coefficient comparison tables (JSON).
    std::string report;
    bool observables_match = false;
    bool mirror_maps_differ = false;
};

// Integrates C_1 to the mirror map and the observables and compares with the quasimap pipeline.
IritaniResult iritani_pipeline(const IritaniBox &box, MirrorEngine &engine);

} // namespace vsc

#endif
