#ifndef VSC_CORRELATORS_HPP
#define VSC_CORRELATORS_HPP

#include "vsc/graded_series.hpp"
#include "vsc/model.hpp"

#include <atomic>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace vsc {

// Closed sector: a + b + Σ(m_i - 1) = N(d+1) - 2 (projective) or d(N-k) + N - 3 (hypersurface).
bool selection_closed(const CorrelatorSpec &spec);
// Open sector: a + Σ(m_i - 1) = 3d - 1 (CP^2) or (N-k)d + (k-3)/2 (hypersurface).
bool selection_open(const CorrelatorSpec &spec);

// The residue integrands, over z_0..z_d (closed) and z_0..z_{d-1} (open).
FactoredRational closed_integrand(const CorrelatorSpec &spec);
FactoredRational open_integrand(const CorrelatorSpec &spec);

struct EngineOptions {
    int retry_limit = 8;
    unsigned threads = 1;
};

// Direct evaluation without memoization.
BigRational vsc_closed(const CorrelatorSpec &spec, const EngineOptions &opts = {});
BigRational vsc_open(const CorrelatorSpec &spec, const EngineOptions &opts = {});
BigRational vsc_value(const CorrelatorSpec &spec, const EngineOptions &opts = {});

// Persistent backing for memoized results (see the CLI's cache).
class ResultStore {
public:
    virtual ~ResultStore() = default;
    virtual std::optional<BigRational> find(const std::string &key) = 0;
    virtual void put(const std::string &key, const BigRational &value) = 0;
};

// Memoizing, thread-safe correlator evaluator.
class Evaluator {
public:
    explicit Evaluator(EngineOptions opts = {}, std::shared_ptr<ResultStore> store = nullptr);

    BigRational value(const CorrelatorSpec &spec);
    // Evaluates missing entries on a worker pool; results are in input order.
    std::vector<BigRational> values(const std::vector<CorrelatorSpec> &specs);

    const EngineOptions &options() const { return opts_; }
    // Number of residue evaluations actually performed.
    std::size_t fresh_evaluations() const { return fresh_.load(); }

private:
    std::optional<BigRational> lookup(const std::string &key);
    void remember(const std::string &key, const BigRational &v);

    EngineOptions opts_;
    std::shared_ptr<ResultStore> store_;
    std::shared_mutex mutex_;
    std::unordered_map<std::string, BigRational> memo_;
    std::atomic<std::size_t> fresh_{0};
};

// Caps and range of insertions admitted in open generating functions.
struct OpenTruncationPolicy {
    int j_max = 3;
    // Top degree d of the computation; at disk degree 2f-1 at most (target - f + extra) units are inserted.
    int target = 1;
    int unit_extra = 0;

    int unit_cap(int f) const { return std::max(0, target - f + unit_extra); }
    static OpenTruncationPolicy for_target(HalfInt dmax, int j_max);
};

// Insertion multi-indices over classes {2..J} (plus j = 0 up to `units` for the open sector) of a given weight.
std::vector<InsertionProfile> insertion_lattice(int weight, int j_max, int units);

// Σ_d Σ_m w(O_a O_b | Π O_j)_d q^d Π x_j^{m_j}/m_j! plus the classical term, over classes {0..max(J, dim)}.
GradedSeries gf_closed(const Model &model, int a, int b, HalfInt dmax, int J, Evaluator &ev);
// Σ_d Σ_m w(O_a | Π O_j)_{disk,2d-1} q^{d-1/2} Π x_j^{m_j}/m_j!, over classes {0..j_max}.
GradedSeries gf_open(const Model &model, int a, HalfInt dmax, const OpenTruncationPolicy &policy, Evaluator &ev);

std::vector<int> class_range(int lo, int hi);

} // namespace vsc

#endif
