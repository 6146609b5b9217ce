#ifndef VSC_MODEL_HPP
#define VSC_MODEL_HPP

#include "vsc/residue.hpp"

#include <map>
#include <string>
#include <string_view>

namespace vsc {

// CP^{N-1}, or the degree-k hypersurface M_N^k in CP^{N-1}.
struct Model {
    enum class Kind { ProjectiveSpace, Hypersurface };
    Kind kind = Kind::ProjectiveSpace;
    int N = 3;
    int k = 1;

    static Model projective(int N);
    static Model hypersurface(int N, int k);
    // "cp:N" or "hyp:N:k"
    static Model parse(std::string_view text);

    bool is_hypersurface() const { return kind == Kind::Hypersurface; }
    int dim() const { return is_hypersurface() ? N - 2 : N - 1; }
    // Intersection number of the top class with the fundamental class.
    int pairing() const { return is_hypersurface() ? k : 1; }
    std::string key() const;

    friend bool operator==(const Model &, const Model &) = default;
};

// Class exponent j -> multiplicity m_j (only positive multiplicities stored).
using InsertionProfile = std::map<int, int>;

std::string insertion_key(const InsertionProfile &ins);
// "2:3,0:1"
InsertionProfile parse_insertions(std::string_view text);
int insertion_count(const InsertionProfile &ins);
// Σ m_j (j - 1).
int insertion_weight(const InsertionProfile &ins);

struct CorrelatorSpec {
    Model model;
    Sector sector = Sector::Closed;
    int d = 1;
    int a = 0;
    int b = 0; // closed sector only
    InsertionProfile insertions;

    // Canonical and unique; used as the cache key.
    std::string key() const;
};

} // namespace vsc

#endif
