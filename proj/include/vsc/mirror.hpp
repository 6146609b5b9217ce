#ifndef VSC_MIRROR_HPP
#define VSC_MIRROR_HPP

#include "vsc/correlators.hpp"
#include "vsc/formal_map.hpp"

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace vsc {

// t^j = w(O_{h^{dim-j}} O_1 | x) / pairing over classes {0..max(J, dim)}.
FormalMap mirror_map_closed(const Model &model, HalfInt dmax, int J, Evaluator &ev);
// Extended CP^2 map over j = 0..J_max; components with j > 2 use negative a.
FormalMap mirror_map_open_cp2(HalfInt dmax, int J_max, Evaluator &ev);

// Builds generating functions in flat coordinates, caching the inverse maps.
class MirrorEngine {
public:
    explicit MirrorEngine(Evaluator &ev) : ev_(ev) {}

    Evaluator &evaluator() { return ev_; }
    const FormalMap &mirror_map(const Model &model, HalfInt dmax, int J);
    const FormalMap &inverse_map(const Model &model, HalfInt dmax, int J);

    // ⟨O_{h^a} O_{h^b}(t)⟩_0 up to Q^dmax.
    GradedSeries gw_closed(const Model &model, int a, int b, HalfInt dmax, int J);
    // ⟨O_{h^a}(t)⟩_disk up to Q^dmax (half-integer). Hypersurfaces always use J_max = N - 2.
    GradedSeries gw_open(const Model &model, int a, HalfInt dmax, const OpenTruncationPolicy &policy);

private:
    struct Entry {
        FormalMap forward;
        FormalMap inverse;
    };
    const Entry &entry(const Model &model, HalfInt dmax, int J);

    Evaluator &ev_;
    std::mutex mutex_;
    std::map<std::string, Entry> cache_;
};

// Correlator ⟨... Π O_{h^j}^{m_j}⟩ at Q^q: the coefficient times Π m_j!.
BigRational extract_gw(const GradedSeries &s, HalfInt q, const InsertionProfile &insertions);

using Partition = std::vector<int>;
// Partitions of f with nondecreasing parts, lexicographic, with Π_i 1/mul(i)!.
std::vector<std::pair<Partition, BigRational>> partitions_with_symmetry(int f);

struct GmtTerm {
    int f = 0;
    Partition partition;
    BigRational symmetry;
    BigRational invariant; // multi-point GW invariant of degree d - f
    BigRational weight;    // Π w(O_{h^{N-3-(k-N)f_j}} O_1)_{f_j} / k
    BigRational value() const { return symmetry * invariant * weight; }
};

// Both sides of the two-point (closed) or one-point (disk) correction formula for general type hypersurfaces.
struct GmtReport {
    Sector sector = Sector::Closed;
    Model model;
    int d = 0;
    int a = 0;
    int b = 0;
    BigRational lhs;       // virtual structure constant
    BigRational invariant; // two-point / one-point GW invariant of degree d
    std::vector<GmtTerm> terms;
    // Closed sector only: the degree-0 three-point term with f = d (absent from the f <= d-1 sum).
    BigRational classical;
    BigRational rhs_without_classical;
    BigRational rhs;
    bool equal = false;

    std::string to_json() const;
};

GmtReport gmt_check_closed(MirrorEngine &engine, const Model &model, int d, int a, int b);
GmtReport gmt_check_open(MirrorEngine &engine, const Model &model, int d, int a);

// ⟨(O_{h^2})^{3d-2}⟩_{disk,2d-1} of CP^2 through the mirror pipeline, with J_max = max(3, d).
BigRational cp2_maximal_disk_invariant(MirrorEngine &engine, int d);

// Genus-0 degree-d plane-curve counts N_1..N_dmax from the WDVV recursion.
std::vector<BigInt> kontsevich_numbers(int dmax);

} // namespace vsc

#endif
