#include "vsc/multipoly.hpp"

#include "vsc/errors.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace vsc {

void Monomial::set(std::size_t i, unsigned e)
{
    if (e > std::numeric_limits<std::uint16_t>::max()) throw RepresentationError("exponent overflow");
    e_[i] = static_cast<std::uint16_t>(e);
}

unsigned Monomial::degree() const
{
    unsigned s = 0;
    for (auto e : e_) s += e;
    return s;
}

Monomial Monomial::operator*(const Monomial &o) const
{
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.e_[i] = static_cast<std::uint16_t>(e_[i] + o.e_[i]);
    return r;
}

Monomial Monomial::operator/(const Monomial &o) const
{
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.e_[i] = static_cast<std::uint16_t>(e_[i] - o.e_[i]);
    return r;
}

bool Monomial::divisible_by(const Monomial &o) const
{
    for (std::size_t i = 0; i < kMaxVars; ++i)
        if (e_[i] < o.e_[i]) return false;
    return true;
}

VarSpace::VarSpace(std::vector<std::string> names) : names_(std::move(names))
{
    if (names_.size() > kMaxVars) throw UsageError("too many variables");
    std::set<std::string> seen(names_.begin(), names_.end());
    if (seen.size() != names_.size()) throw UsageError("duplicate variable name");
}

std::optional<std::size_t> VarSpace::index_of(const std::string &name) const
{
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
}

VarSpacePtr make_varspace(std::vector<std::string> names)
{
    return std::make_shared<const VarSpace>(std::move(names));
}

VarSpacePtr residue_varspace(std::size_t n)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("z" + std::to_string(i));
    return make_varspace(std::move(names));
}

MultiPoly::MultiPoly(VarSpacePtr vars) : vars_(std::move(vars))
{
    if (!vars_) throw UsageError("null VarSpace");
}

MultiPoly MultiPoly::constant(VarSpacePtr vars, const BigRational &c)
{
    MultiPoly p(std::move(vars));
    p.add_term(Monomial{}, c);
    return p;
}

MultiPoly MultiPoly::variable(VarSpacePtr vars, std::size_t i, unsigned power)
{
    if (i >= vars->size()) throw UsageError("variable index out of range");
    MultiPoly p(std::move(vars));
    Monomial m;
    m.set(i, power);
    p.add_term(m, 1);
    return p;
}

MultiPoly MultiPoly::linear(VarSpacePtr vars, const std::vector<BigRational> &coeffs)
{
    if (coeffs.size() != vars->size()) throw UsageError("linear form length mismatch");
    MultiPoly p(std::move(vars));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        Monomial m;
        m.set(i, 1);
        p.add_term(m, coeffs[i]);
    }
    return p;
}

std::optional<BigRational> MultiPoly::as_constant() const
{
    if (terms_.empty()) return BigRational(0);
    if (terms_.size() == 1 && terms_.begin()->first == Monomial{}) return terms_.begin()->second;
    return std::nullopt;
}

void MultiPoly::add_term(const Monomial &m, const BigRational &c)
{
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void MultiPoly::check_same(const MultiPoly &o) const
{
    if (vars_ != o.vars_ && !(*vars_ == *o.vars_)) throw UsageError("mismatched VarSpace");
}

MultiPoly &MultiPoly::operator+=(const MultiPoly &o)
{
    check_same(o);
    for (const auto &[m, c] : o.terms_) add_term(m, c);
    return *this;
}

MultiPoly &MultiPoly::operator-=(const MultiPoly &o)
{
    check_same(o);
    for (const auto &[m, c] : o.terms_) add_term(m, -c);
    return *this;
}

MultiPoly &MultiPoly::operator*=(const BigRational &c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto &[m, v] : terms_) v *= c;
    return *this;
}

MultiPoly MultiPoly::operator-() const
{
    MultiPoly r(*this);
    for (auto &[m, v] : r.terms_) v = -v;
    return r;
}

void MultiPoly::add_product(const MultiPoly &a, const MultiPoly &b)
{
    check_same(a);
    check_same(b);
    BigRational prod;
    for (const auto &[ma, ca] : a.terms_) {
        auto hint = terms_.begin();
        for (const auto &[mb, cb] : b.terms_) {
            prod = ca * cb;
            Monomial m = ma * mb;
            hint = terms_.lower_bound(m);
            if (hint != terms_.end() && hint->first == m) {
                hint->second += prod;
            } else {
                terms_.emplace_hint(hint, m, prod);
            }
        }
    }
    std::erase_if(terms_, [](const auto &kv) { return kv.second == 0; });
}

MultiPoly operator*(const MultiPoly &a, const MultiPoly &b)
{
    MultiPoly r(a.vars_);
    r.add_product(a, b);
    return r;
}

MultiPoly poly_mul(const MultiPoly &a, const MultiPoly &b)
{
    return a * b;
}

bool operator==(const MultiPoly &a, const MultiPoly &b)
{
    a.check_same(b);
    return a.terms_ == b.terms_;
}

MultiPoly MultiPoly::mul_monomial(const Monomial &m, const BigRational &c) const
{
    MultiPoly r(vars_);
    if (c == 0) return r;
    for (const auto &[mm, v] : terms_) r.terms_.emplace_hint(r.terms_.end(), mm * m, v * c);
    return r;
}

MultiPoly MultiPoly::pow(unsigned n) const
{
    MultiPoly result = constant(vars_, 1);
    MultiPoly base = *this;
    while (n > 0) {
        if (n & 1u) result = result * base;
        n >>= 1u;
        if (n > 0) base = base * base;
    }
    return result;
}

std::optional<unsigned> MultiPoly::homogeneous_degree() const
{
    if (terms_.empty()) return std::nullopt;
    const unsigned deg = terms_.begin()->first.degree();
    for (const auto &[m, c] : terms_)
        if (m.degree() != deg) return std::nullopt;
    return deg;
}

unsigned MultiPoly::degree_in(std::size_t var) const
{
    unsigned d = 0;
    for (const auto &[m, c] : terms_) d = std::max(d, m[var]);
    return d;
}

std::vector<MultiPoly> MultiPoly::split_by(std::size_t var) const
{
    std::vector<MultiPoly> parts(degree_in(var) + 1, MultiPoly(vars_));
    for (const auto &[m, c] : terms_) {
        Monomial rest = m;
        rest.set(var, 0);
        parts[m[var]].terms_.emplace(rest, c);
    }
    return parts;
}

MultiPoly MultiPoly::substitute_linear(std::size_t var, const std::vector<BigRational> &form) const
{
    std::vector<BigRational> f = form;
    f.at(var) = 0;
    const MultiPoly lin = linear(vars_, f);
    const auto parts = split_by(var);
    // Horner in the substituted variable.
    MultiPoly acc(vars_);
    for (std::size_t e = parts.size(); e-- > 0;) {
        acc = acc * lin;
        acc += parts[e];
    }
    return acc;
}

std::string MultiPoly::to_string() const
{
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto &[m, c] : terms_) {
        if (!first) out += " + ";
        first = false;
        out += vsc::to_string(c);
        for (std::size_t i = 0; i < vars_->size(); ++i) {
            if (m[i] == 0) continue;
            out += "*" + vars_->name(i);
            if (m[i] > 1) out += "^" + std::to_string(m[i]);
        }
    }
    return out;
}

} // namespace vsc
