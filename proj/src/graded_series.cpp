#include "vsc/graded_series.hpp"

#include "vsc/errors.hpp"

#include <algorithm>
#include <sstream>

namespace vsc {

HalfInt HalfInt::parse(std::string_view text)
{
    BigRational r = parse_rational(text);
    BigRational twice = r * 2;
    if (twice.get_den() != 1 || !twice.get_num().fits_sint_p())
        throw UsageError("not a half-integer: '" + std::string(text) + "'");
    return HalfInt{static_cast<int>(twice.get_num().get_si())};
}

std::string HalfInt::to_string() const
{
    if (is_integer()) return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
}

GradedSeries::GradedSeries(std::vector<int> classes, HalfInt dmax) : classes_(std::move(classes)), dmax_(dmax)
{
    if (!std::is_sorted(classes_.begin(), classes_.end())
        || std::adjacent_find(classes_.begin(), classes_.end()) != classes_.end())
        throw UsageError("series classes must be strictly increasing");
    if (classes_.size() > kMaxVars) throw UsageError("too many series couplings");
    if (dmax_.twice < 0) throw UsageError("negative truncation bound");
}

GradedSeries GradedSeries::constant(std::vector<int> classes, HalfInt dmax, const BigRational &c)
{
    GradedSeries s(std::move(classes), dmax);
    s.add_term(HalfInt{}, Monomial{}, c);
    return s;
}

GradedSeries GradedSeries::coupling(std::vector<int> classes, HalfInt dmax, int j)
{
    GradedSeries s(std::move(classes), dmax);
    Monomial m;
    m.set(s.slot(j), 1);
    s.add_term(HalfInt{}, m, 1);
    return s;
}

std::size_t GradedSeries::slot(int j) const
{
    auto it = std::lower_bound(classes_.begin(), classes_.end(), j);
    if (it == classes_.end() || *it != j) throw UsageError("coupling x" + std::to_string(j) + " not in series");
    return static_cast<std::size_t>(it - classes_.begin());
}

bool GradedSeries::has_class(int j) const
{
    return std::binary_search(classes_.begin(), classes_.end(), j);
}

void GradedSeries::add_term(HalfInt q, const Monomial &x, const BigRational &c)
{
    if (q.twice < 0) throw UsageError("negative q-degree");
    if (q > dmax_ || c == 0) return;
    auto [it, inserted] = terms_.try_emplace(Key{q, x}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Monomial GradedSeries::monomial_of(const GradedSeries &s, const std::map<int, unsigned> &exponents)
{
    Monomial m;
    for (const auto &[j, e] : exponents)
        if (e > 0) m.set(s.slot(j), e);
    return m;
}

BigRational GradedSeries::coefficient(HalfInt q, const std::map<int, unsigned> &exponents) const
{
    if (q > dmax_)
        throw BoundError("q-degree " + q.to_string() + " beyond truncation " + dmax_.to_string());
    auto it = terms_.find(Key{q, monomial_of(*this, exponents)});
    return it == terms_.end() ? BigRational(0) : it->second;
}

HalfInt GradedSeries::min_degree() const
{
    return terms_.empty() ? dmax_ : terms_.begin()->first.q;
}

void GradedSeries::check_same(const GradedSeries &o) const
{
    if (classes_ != o.classes_) throw UsageError("series over different couplings");
}

GradedSeries &GradedSeries::operator+=(const GradedSeries &o)
{
    check_same(o);
    dmax_ = std::min(dmax_, o.dmax_);
    std::erase_if(terms_, [&](const auto &kv) { return kv.first.q > dmax_; });
    for (const auto &[k, c] : o.terms_) add_term(k.q, k.x, c);
    return *this;
}

GradedSeries &GradedSeries::operator-=(const GradedSeries &o)
{
    check_same(o);
    dmax_ = std::min(dmax_, o.dmax_);
    std::erase_if(terms_, [&](const auto &kv) { return kv.first.q > dmax_; });
    for (const auto &[k, c] : o.terms_) add_term(k.q, k.x, -c);
    return *this;
}

GradedSeries &GradedSeries::operator*=(const BigRational &c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto &[k, v] : terms_) v *= c;
    return *this;
}

bool operator==(const GradedSeries &a, const GradedSeries &b)
{
    return a.classes_ == b.classes_ && a.dmax_ == b.dmax_ && a.terms_ == b.terms_;
}

GradedSeries GradedSeries::mul_truncated(const GradedSeries &a, const GradedSeries &b, HalfInt bound)
{
    a.check_same(b);
    GradedSeries r(a.classes_, bound);
    if (a.terms_.empty() || b.terms_.empty()) return r;
    const HalfInt bmin = b.terms_.begin()->first.q;
    BigRational prod;
    for (const auto &[ka, ca] : a.terms_) {
        if (ka.q + bmin > bound) break;
        for (const auto &[kb, cb] : b.terms_) {
            const HalfInt q = ka.q + kb.q;
            if (q > bound) break;
            prod = ca * cb;
            r.add_term(q, ka.x * kb.x, prod);
        }
    }
    return r;
}

GradedSeries series_mul(const GradedSeries &a, const GradedSeries &b)
{
    return GradedSeries::mul_truncated(a, b, std::min(a.dmax(), b.dmax()));
}

GradedSeries GradedSeries::truncated(HalfInt bound) const
{
    GradedSeries r(classes_, std::min(bound, dmax_));
    for (const auto &[k, c] : terms_) r.add_term(k.q, k.x, c);
    return r;
}

GradedSeries GradedSeries::embedded(const std::vector<int> &classes) const
{
    GradedSeries r(classes, dmax_);
    std::vector<std::size_t> where;
    for (int j : classes_) where.push_back(r.slot(j));
    for (const auto &[k, c] : terms_) {
        Monomial m;
        for (std::size_t i = 0; i < classes_.size(); ++i) m.set(where[i], k.x[i]);
        r.terms_.emplace(Key{k.q, m}, c);
    }
    return r;
}

GradedSeries GradedSeries::slice_zero(int j) const
{
    const std::size_t s = slot(j);
    GradedSeries r(classes_, dmax_);
    for (const auto &[k, c] : terms_)
        if (k.x[s] == 0) r.terms_.emplace(k, c);
    return r;
}

GradedSeries GradedSeries::at_degree(HalfInt q) const
{
    GradedSeries r(classes_, dmax_);
    for (const auto &[k, c] : terms_)
        if (k.q == q) r.terms_.emplace(k, c);
    return r;
}

GradedSeries GradedSeries::derivative(int j) const
{
    const std::size_t s = slot(j);
    GradedSeries r(classes_, dmax_);
    for (const auto &[k, c] : terms_) {
        if (k.x[s] > 0) {
            Monomial m = k.x;
            m.set(s, k.x[s] - 1);
            r.add_term(k.q, m, c * k.x[s]);
        }
        if (j == kLogClass && k.q.twice != 0) r.add_term(k.q, k.x, c * k.q.to_rational());
    }
    return r;
}

GradedSeries GradedSeries::exp_scaled(const GradedSeries &s, const BigRational &c)
{
    if (!s.terms_.empty() && s.terms_.begin()->first.q.twice == 0)
        throw ContractError("exp of a series with a q^0 term");
    GradedSeries result = constant(s.classes_, s.dmax_, 1);
    GradedSeries scaled = s * c;
    GradedSeries power = result;
    for (unsigned k = 1; !scaled.is_zero(); ++k) {
        power = mul_truncated(power, scaled, s.dmax_) * ratio(1, static_cast<long>(k));
        if (power.is_zero()) break;
        result += power;
    }
    return result;
}

std::string degree_text(HalfInt q, const std::string &symbol)
{
    if (q.twice == 0) return "";
    if (q.twice == 2) return symbol;
    if (q.is_integer()) return symbol + "^" + std::to_string(q.twice / 2);
    return symbol + "^{" + std::to_string(q.twice) + "/2}";
}

namespace {

std::vector<std::string> factor_texts(const GradedSeries &s, const GradedSeries::Key &k, const SeriesSymbols &sym,
                                      bool q_first)
{
    std::vector<std::string> out;
    std::string qt = degree_text(k.q, sym.q);
    if (q_first && !qt.empty()) out.push_back(qt);
    for (std::size_t i = 0; i < s.classes().size(); ++i) {
        const unsigned e = k.x[i];
        if (e == 0) continue;
        std::string f = sym.var + std::to_string(s.classes()[i]);
        if (e > 1) f += "^" + std::to_string(e);
        out.push_back(f);
    }
    if (!q_first && !qt.empty()) out.push_back(qt);
    return out;
}

std::vector<std::string> split_on(std::string_view text, std::string_view sep)
{
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        auto next = text.find(sep, pos);
        parts.emplace_back(text.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + sep.size();
    }
    return parts;
}

} // namespace

std::string to_canonical_text(const GradedSeries &s, const SeriesSymbols &sym)
{
    if (s.is_zero()) return "0";
    std::string out;
    for (const auto &[k, c] : s.terms()) {
        if (!out.empty()) out += " + ";
        out += to_string(c);
        for (const auto &f : factor_texts(s, k, sym, true)) out += " * " + f;
    }
    return out;
}

GradedSeries parse_canonical_text(std::string_view text, std::vector<int> classes, HalfInt dmax,
                                  const SeriesSymbols &sym)
{
    GradedSeries s(std::move(classes), dmax);
    if (text == "0") return s;
    for (const auto &term : split_on(text, " + ")) {
        auto factors = split_on(term, " * ");
        BigRational c = parse_rational(factors.front());
        HalfInt q{};
        std::map<int, unsigned> exps;
        for (std::size_t i = 1; i < factors.size(); ++i) {
            std::string_view f = factors[i];
            std::string_view base = f.substr(0, f.find('^'));
            std::string_view power = f.find('^') == std::string_view::npos ? std::string_view{} : f.substr(f.find('^') + 1);
            if (base == sym.q) {
                if (power.empty()) {
                    q = HalfInt::from_int(1);
                } else if (power.front() == '{') {
                    q = HalfInt::parse(power.substr(1, power.size() - 2));
                } else {
                    q = HalfInt::parse(power);
                }
            } else if (base.substr(0, sym.var.size()) == sym.var) {
                int j = std::stoi(std::string(base.substr(sym.var.size())));
                exps[j] += power.empty() ? 1u : static_cast<unsigned>(std::stoul(std::string(power)));
            } else {
                throw UsageError("unrecognized factor '" + std::string(f) + "'");
            }
        }
        s.add_term(q, GradedSeries::monomial_of(s, exps), c);
    }
    return s;
}

std::string to_compact_text(const GradedSeries &s, const SeriesSymbols &sym)
{
    if (s.is_zero()) return "0";
    std::string out;
    for (const auto &[k, c] : s.terms()) {
        auto factors = factor_texts(s, k, sym, false);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        BigRational a = abs(c);
        std::string body;
        if (a != 1 || factors.empty()) body = to_string(a);
        for (const auto &f : factors) body += (body.empty() ? "" : " ") + f;
        out += body;
    }
    return out;
}

std::string to_csv(const GradedSeries &s, const SeriesSymbols &sym)
{
    std::ostringstream os;
    os << "q_degree,monomial,coefficient\n";
    for (const auto &[k, c] : s.terms()) {
        SeriesSymbols no_q = sym;
        GradedSeries::Key kx{HalfInt{}, k.x};
        auto factors = factor_texts(s, kx, no_q, true);
        std::string mono;
        for (const auto &f : factors) mono += (mono.empty() ? "" : "*") + f;
        os << k.q.to_string() << "," << (mono.empty() ? "1" : mono) << "," << to_string(c) << "\n";
    }
    return os.str();
}

} // namespace vsc
