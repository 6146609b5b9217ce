#include "vsc/correlators.hpp"

#include "vsc/errors.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

namespace vsc {

namespace {

void require_open_model(const Model &m)
{
    if (m.is_hypersurface()) {
        if (m.k % 2 == 0) throw UsageError("open sector needs odd k");
    } else if (m.N != 3) {
        throw UnsupportedError("open sector is defined for CP^2 only among projective spaces");
    }
}

void check_insertions(const InsertionProfile &ins)
{
    for (const auto &[j, m] : ins)
        if (j < 0 || m < 0) throw UsageError("insertions need j >= 0 and m >= 0");
}

// z^e goes to the numerator for e >= 0 and is recorded as a denominator exponent otherwise.
void apply_power(MultiPoly &num, std::vector<int> &den_exp, std::size_t var, int e)
{
    if (e >= 0) {
        Monomial m;
        m.set(var, static_cast<unsigned>(e));
        num = num.mul_monomial(m, 1);
    } else {
        den_exp[var] += -e;
    }
}

BigRational double_factorial(int k)
{
    BigRational r = 1;
    for (int i = k; i > 1; i -= 2) r *= i;
    return r;
}

} // namespace

bool selection_closed(const CorrelatorSpec &spec)
{
    const Model &m = spec.model;
    const int lhs = spec.a + spec.b + insertion_weight(spec.insertions);
    const int rhs = m.is_hypersurface() ? spec.d * (m.N - m.k) + m.N - 3 : m.N * (spec.d + 1) - 2;
    return lhs == rhs;
}

bool selection_open(const CorrelatorSpec &spec)
{
    const Model &m = spec.model;
    require_open_model(m);
    const int lhs = spec.a + insertion_weight(spec.insertions);
    if (!m.is_hypersurface()) return lhs == 3 * spec.d - 1;
    const int twice_rhs = 2 * (m.N - m.k) * spec.d + m.k - 3;
    return 2 * lhs == twice_rhs;
}

FactoredRational closed_integrand(const CorrelatorSpec &spec)
{
    if (spec.sector != Sector::Closed) throw UsageError("closed integrand needs a closed spec");
    if (spec.d < 1) throw UsageError("degree must be >= 1");
    if (spec.b < 0) throw UsageError("negative b is not supported");
    check_insertions(spec.insertions);
    const Model &model = spec.model;
    const int d = spec.d;
    const auto vars = residue_varspace(static_cast<std::size_t>(d + 1));
    MultiPoly num = MultiPoly::constant(vars, 1);
    std::vector<int> z_exp(static_cast<std::size_t>(d + 1), -model.N);
    z_exp[0] += spec.a;
    z_exp[static_cast<std::size_t>(d)] += spec.b;
    BigRational scalar = 1;
    if (model.is_hypersurface()) {
        for (int j = 1; j <= d; ++j) num = num * kernel_e(vars, model.k, j - 1, j);
        for (int j = 1; j < d; ++j) z_exp[static_cast<std::size_t>(j)] -= 1;
        scalar /= rational_pow(BigRational(model.k), d - 1);
    }
    for (const auto &[m, mult] : spec.insertions) {
        MultiPoly sum(vars);
        for (int j = 1; j <= d; ++j) sum += kernel_w_poly(vars, m, 1, j - 1, j);
        num = num * sum.pow(static_cast<unsigned>(mult));
    }
    std::vector<int> den_exp(z_exp.size(), 0);
    for (std::size_t j = 0; j < z_exp.size(); ++j) apply_power(num, den_exp, j, z_exp[j]);
    FactoredRational f(std::move(num), scalar);
    for (std::size_t j = 0; j < den_exp.size(); ++j)
        if (den_exp[j] > 0) f.divide_by_variable(j, den_exp[j]);
    for (int j = 1; j < d; ++j) {
        std::vector<BigRational> form(static_cast<std::size_t>(d + 1));
        form[static_cast<std::size_t>(j)] = 2;
        form[static_cast<std::size_t>(j - 1)] = -1;
        form[static_cast<std::size_t>(j + 1)] = -1;
        f.divide_by(form);
    }
    return f;
}

FactoredRational open_integrand(const CorrelatorSpec &spec)
{
    if (spec.sector != Sector::Open) throw UsageError("open integrand needs an open spec");
    if (spec.d < 1) throw UsageError("degree must be >= 1");
    check_insertions(spec.insertions);
    const Model &model = spec.model;
    require_open_model(model);
    const int d = spec.d;
    const std::size_t last = static_cast<std::size_t>(d - 1);
    const auto vars = residue_varspace(static_cast<std::size_t>(d));
    MultiPoly num = MultiPoly::constant(vars, 1);
    std::vector<int> z_exp(static_cast<std::size_t>(d), -model.N);
    z_exp[0] += spec.a;
    BigRational scalar = 2;
    if (model.is_hypersurface()) {
        scalar *= double_factorial(model.k);
        z_exp[last] += (model.k + 1) / 2;
        for (int j = 1; j < d; ++j) num = num * kernel_e(vars, model.k, j - 1, j);
        for (int j = 1; j < d; ++j) z_exp[static_cast<std::size_t>(j)] -= 1;
        scalar /= rational_pow(BigRational(model.k), d - 1);
    }
    for (const auto &[m, mult] : spec.insertions) {
        if (m == 0) {
            z_exp[last] -= mult;
            scalar *= rational_pow(ratio(1, 2), mult);
            continue;
        }
        MultiPoly sum(vars);
        for (int j = 1; j < d; ++j) sum += kernel_w_poly(vars, m, 1, j - 1, j);
        sum += MultiPoly::variable(vars, last, static_cast<unsigned>(m - 1)) * ratio(1, 2);
        num = num * sum.pow(static_cast<unsigned>(mult));
    }
    std::vector<int> den_exp(z_exp.size(), 0);
    for (std::size_t j = 0; j < z_exp.size(); ++j) apply_power(num, den_exp, j, z_exp[j]);
    FactoredRational f(std::move(num), scalar);
    for (std::size_t j = 0; j < den_exp.size(); ++j)
        if (den_exp[j] > 0) f.divide_by_variable(j, den_exp[j]);
    // Moving factors with z_d := -z_{d-1}.
    for (int j = 1; j < d; ++j) {
        std::vector<BigRational> form(static_cast<std::size_t>(d));
        form[static_cast<std::size_t>(j)] = 2;
        form[static_cast<std::size_t>(j - 1)] = -1;
        if (j + 1 < d)
            form[static_cast<std::size_t>(j + 1)] = -1;
        else
            form[static_cast<std::size_t>(j)] += 1;
        f.divide_by(form);
    }
    return f;
}

BigRational vsc_closed(const CorrelatorSpec &spec, const EngineOptions &opts)
{
    if (spec.sector != Sector::Closed) throw UsageError("vsc_closed needs a closed spec");
    check_insertions(spec.insertions);
    if (spec.insertions.count(0)) return 0;
    if (!selection_closed(spec)) return 0;
    return iterated_residue_retrying(closed_integrand(spec), default_radii(spec.d, Sector::Closed), Sector::Closed,
                                     opts.retry_limit);
}

BigRational vsc_open(const CorrelatorSpec &spec, const EngineOptions &opts)
{
    if (spec.sector != Sector::Open) throw UsageError("vsc_open needs an open spec");
    check_insertions(spec.insertions);
    if (!selection_open(spec)) return 0;
    return iterated_residue_retrying(open_integrand(spec), default_radii(spec.d, Sector::Open), Sector::Open,
                                     opts.retry_limit);
}

BigRational vsc_value(const CorrelatorSpec &spec, const EngineOptions &opts)
{
    return spec.sector == Sector::Closed ? vsc_closed(spec, opts) : vsc_open(spec, opts);
}

Evaluator::Evaluator(EngineOptions opts, std::shared_ptr<ResultStore> store)
    : opts_(opts), store_(std::move(store))
{
}

std::optional<BigRational> Evaluator::lookup(const std::string &key)
{
    {
        std::shared_lock lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    if (store_) {
        if (auto v = store_->find(key)) {
            std::unique_lock lock(mutex_);
            memo_.emplace(key, *v);
            return v;
        }
    }
    return std::nullopt;
}

void Evaluator::remember(const std::string &key, const BigRational &v)
{
    bool inserted;
    {
        std::unique_lock lock(mutex_);
        inserted = memo_.emplace(key, v).second;
    }
    if (inserted && store_) store_->put(key, v);
}

BigRational Evaluator::value(const CorrelatorSpec &spec)
{
    return values({spec}).front();
}

std::vector<BigRational> Evaluator::values(const std::vector<CorrelatorSpec> &specs)
{
    std::vector<std::optional<BigRational>> found(specs.size());
    std::vector<std::size_t> missing;
    std::unordered_map<std::string, std::size_t> first_missing;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const std::string key = specs[i].key();
        found[i] = lookup(key);
        if (!found[i] && first_missing.emplace(key, i).second) missing.push_back(i);
    }
    std::vector<BigRational> computed(missing.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < missing.size();) {
            try {
                computed[t] = vsc_value(specs[missing[t]], opts_);
                fresh_.fetch_add(1);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned nthreads = std::max(1u, std::min<unsigned>(opts_.threads, static_cast<unsigned>(missing.size())));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    // Insert in input order so the persistent store is written deterministically.
    for (std::size_t t = 0; t < missing.size(); ++t) remember(specs[missing[t]].key(), computed[t]);
    std::vector<BigRational> out(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i)
        out[i] = found[i] ? *found[i] : computed[static_cast<std::size_t>(
                                 std::find(missing.begin(), missing.end(), first_missing.at(specs[i].key())) - missing.begin())];
    return out;
}

OpenTruncationPolicy OpenTruncationPolicy::for_target(HalfInt dmax, int j_max)
{
    OpenTruncationPolicy p;
    p.j_max = j_max;
    p.target = dmax.ceil();
    return p;
}

std::vector<int> class_range(int lo, int hi)
{
    std::vector<int> r;
    for (int j = lo; j <= hi; ++j) r.push_back(j);
    return r;
}

namespace {

void lattice_rec(int weight, int j, InsertionProfile &cur, std::vector<InsertionProfile> &out)
{
    if (weight == 0) {
        out.push_back(cur);
        return;
    }
    if (j < 2) return;
    for (int m = weight / (j - 1); m >= 0; --m) {
        if (m > 0) cur[j] = m;
        lattice_rec(weight - m * (j - 1), j - 1, cur, out);
        cur.erase(j);
    }
}

BigRational insertion_symmetry(const InsertionProfile &ins)
{
    BigRational s = 1;
    for (const auto &[j, m] : ins) s /= BigRational(factorial(static_cast<unsigned>(m)));
    return s;
}

Monomial insertion_monomial(const GradedSeries &s, const InsertionProfile &ins)
{
    std::map<int, unsigned> e;
    for (const auto &[j, m] : ins) e[j] = static_cast<unsigned>(m);
    return GradedSeries::monomial_of(s, e);
}

} // namespace

std::vector<InsertionProfile> insertion_lattice(int weight, int j_max, int units)
{
    std::vector<InsertionProfile> out;
    for (int u = 0; u <= units; ++u) {
        if (weight + u < 0) continue;
        InsertionProfile cur;
        std::vector<InsertionProfile> part;
        lattice_rec(weight + u, j_max, cur, part);
        for (auto &p : part) {
            if (u > 0) p[0] = u;
            out.push_back(std::move(p));
        }
    }
    return out;
}

GradedSeries gf_closed(const Model &model, int a, int b, HalfInt dmax, int J, Evaluator &ev)
{
    if (!dmax.is_integer()) throw UsageError("closed generating functions need an integer bound");
    const int top = std::max(J, model.dim());
    GradedSeries s(class_range(0, top), dmax);
    const int c = model.dim() - a - b;
    if (c >= 0 && c <= top) {
        Monomial m;
        m.set(s.slot(c), 1);
        s.add_term(HalfInt{}, m, model.pairing());
    }
    std::vector<CorrelatorSpec> specs;
    for (int d = 1; d <= dmax.floor(); ++d) {
        CorrelatorSpec base{model, Sector::Closed, d, a, b, {}};
        const int rhs = model.is_hypersurface() ? d * (model.N - model.k) + model.N - 3 : model.N * (d + 1) - 2;
        for (auto &ins : insertion_lattice(rhs - a - b, J, 0)) {
            base.insertions = std::move(ins);
            specs.push_back(base);
        }
    }
    const auto values = ev.values(specs);
    for (std::size_t i = 0; i < specs.size(); ++i)
        s.add_term(HalfInt::from_int(specs[i].d), insertion_monomial(s, specs[i].insertions),
                   values[i] * insertion_symmetry(specs[i].insertions));
    return s;
}

GradedSeries gf_open(const Model &model, int a, HalfInt dmax, const OpenTruncationPolicy &policy, Evaluator &ev)
{
    require_open_model(model);
    if (dmax.is_integer() && dmax.twice != 0) throw UsageError("open generating functions need a half-integer bound");
    if (policy.j_max < model.dim()) throw UsageError("J_max below the target dimension");
    GradedSeries s(class_range(0, policy.j_max), dmax);
    std::vector<CorrelatorSpec> specs;
    for (int d = 1; HalfInt::halves(2 * d - 1) <= dmax; ++d) {
        CorrelatorSpec base{model, Sector::Open, d, a, 0, {}};
        // a + weight = rhs, where units contribute -1 each.
        const int twice_rhs = model.is_hypersurface() ? 2 * (model.N - model.k) * d + model.k - 3 : 2 * (3 * d - 1);
        if (twice_rhs % 2 != 0) continue;
        for (auto &ins : insertion_lattice(twice_rhs / 2 - a, policy.j_max, policy.unit_cap(d))) {
            base.insertions = std::move(ins);
            specs.push_back(base);
        }
    }
    const auto values = ev.values(specs);
    for (std::size_t i = 0; i < specs.size(); ++i)
        s.add_term(HalfInt::halves(2 * specs[i].d - 1), insertion_monomial(s, specs[i].insertions),
                   values[i] * insertion_symmetry(specs[i].insertions));
    return s;
}

} // namespace vsc
