#include "vsc/factored_rational.hpp"

#include "vsc/errors.hpp"

#include <algorithm>

namespace vsc {

std::pair<LinearForm, BigRational> LinearForm::normalize(std::vector<BigRational> coeffs)
{
    auto lead = std::find_if(coeffs.begin(), coeffs.end(), [](const BigRational &c) { return c != 0; });
    if (lead == coeffs.end()) throw UsageError("linear form with all coefficients zero");
    BigRational scale = *lead;
    if (scale != 1)
        for (auto &c : coeffs) c /= scale;
    LinearForm f;
    f.c_ = std::move(coeffs);
    return {std::move(f), std::move(scale)};
}

LinearForm LinearForm::coordinate(std::size_t n, std::size_t i)
{
    std::vector<BigRational> c(n);
    c.at(i) = 1;
    return normalize(std::move(c)).first;
}

bool LinearForm::is_coordinate(std::size_t var) const
{
    for (std::size_t i = 0; i < c_.size(); ++i)
        if ((i == var) != (c_[i] != 0)) return false;
    return true;
}

MultiPoly LinearForm::to_poly(const VarSpacePtr &vars) const
{
    return MultiPoly::linear(vars, c_);
}

std::string LinearForm::to_string(const VarSpace &vars) const
{
    std::string out;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!out.empty()) out += c_[i] < 0 ? " - " : " + ";
        else if (c_[i] < 0) out += "-";
        BigRational a = abs(c_[i]);
        if (a != 1) out += vsc::to_string(a) + "*";
        out += vars.name(i);
    }
    return out;
}

bool operator<(const LinearForm &a, const LinearForm &b)
{
    return std::lexicographical_compare(a.c_.begin(), a.c_.end(), b.c_.begin(), b.c_.end());
}

FactoredRational::FactoredRational(MultiPoly numerator, BigRational scalar)
    : scalar_(std::move(scalar)), num_(std::move(numerator))
{
    normalize_zero();
}

FactoredRational FactoredRational::zero(VarSpacePtr vars)
{
    return FactoredRational(MultiPoly(std::move(vars)), 1);
}

void FactoredRational::normalize_zero()
{
    if (scalar_ == 0 || num_.is_zero()) {
        num_ = MultiPoly(num_.vars());
        scalar_ = 1;
        den_.clear();
    }
}

void FactoredRational::insert_factor(const LinearForm &f, int exponent)
{
    if (exponent == 0) return;
    auto it = std::lower_bound(den_.begin(), den_.end(), f,
                               [](const DenominatorFactor &a, const LinearForm &b) { return a.form < b; });
    if (it != den_.end() && it->form == f) {
        it->exponent += exponent;
        if (it->exponent < 0) throw ContractError("negative denominator exponent");
        if (it->exponent == 0) den_.erase(it);
        return;
    }
    if (exponent < 0) throw ContractError("negative denominator exponent");
    den_.insert(it, DenominatorFactor{f, exponent});
}

FactoredRational &FactoredRational::divide_by(const std::vector<BigRational> &coeffs, int exponent)
{
    if (coeffs.size() != vars()->size()) throw UsageError("linear form length mismatch");
    if (exponent < 0) throw UsageError("negative exponent in divide_by");
    if (is_zero() || exponent == 0) return *this;
    auto [form, lambda] = LinearForm::normalize(coeffs);
    scalar_ /= rational_pow(lambda, exponent);
    insert_factor(form, exponent);
    return *this;
}

FactoredRational &FactoredRational::divide_by_variable(std::size_t var, int exponent)
{
    std::vector<BigRational> c(vars()->size());
    c.at(var) = 1;
    return divide_by(c, exponent);
}

FactoredRational &FactoredRational::multiply_by(const MultiPoly &p)
{
    num_ = num_ * p;
    normalize_zero();
    return *this;
}

FactoredRational &FactoredRational::scale(const BigRational &c)
{
    scalar_ *= c;
    normalize_zero();
    return *this;
}

std::optional<int> FactoredRational::homogeneity_degree() const
{
    auto d = num_.homogeneous_degree();
    if (!d) return std::nullopt;
    int deg = static_cast<int>(*d);
    for (const auto &f : den_) deg -= f.exponent;
    return deg;
}

std::optional<MultiPoly> divide_exact(const MultiPoly &p, const LinearForm &form)
{
    const auto &c = form.coeffs();
    std::size_t pivot = 0;
    while (c[pivot] == 0) ++pivot;
    // form = z_pivot - r, with r linear in the other variables.
    std::vector<BigRational> rc(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        if (i != pivot) rc[i] = -c[i];
    const MultiPoly r = MultiPoly::linear(p.vars(), rc);
    auto a = p.split_by(pivot);
    const std::size_t n = a.size() - 1;
    if (n == 0) return p.is_zero() ? std::optional<MultiPoly>(p) : std::nullopt;
    std::vector<MultiPoly> b(n, MultiPoly(p.vars()));
    b[n - 1] = a[n];
    for (std::size_t k = n - 1; k >= 1; --k) {
        b[k - 1] = a[k];
        b[k - 1].add_product(r, b[k]);
    }
    MultiPoly rem = a[0];
    rem.add_product(r, b[0]);
    if (!rem.is_zero()) return std::nullopt;
    MultiPoly q(p.vars());
    for (std::size_t k = 0; k < n; ++k) {
        Monomial m;
        m.set(pivot, static_cast<unsigned>(k));
        q += b[k].mul_monomial(m, 1);
    }
    return q;
}

void FactoredRational::cancel()
{
    for (auto it = den_.begin(); it != den_.end();) {
        while (it->exponent > 0) {
            auto q = divide_exact(num_, it->form);
            if (!q) break;
            num_ = std::move(*q);
            --it->exponent;
        }
        if (it->exponent == 0)
            it = den_.erase(it);
        else
            ++it;
    }
}

BigRational FactoredRational::constant_value() const
{
    auto c = num_.as_constant();
    if (!c || !den_.empty()) throw ContractError("function still depends on variables:\n" + dump());
    return scalar_ * *c;
}

FactoredRational fr_mul(const FactoredRational &a, const FactoredRational &b)
{
    FactoredRational r(a.num_ * b.num_, a.scalar_ * b.scalar_);
    if (r.is_zero()) return r;
    r.den_ = a.den_;
    for (const auto &f : b.den_) r.insert_factor(f.form, f.exponent);
    return r;
}

FactoredRational fr_add(const FactoredRational &a, const FactoredRational &b)
{
    if (a.vars() != b.vars() && !(*a.vars() == *b.vars())) throw UsageError("mismatched VarSpace");
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // Least common multiset of factors.
    std::vector<DenominatorFactor> common;
    std::size_t i = 0, j = 0;
    while (i < a.den_.size() || j < b.den_.size()) {
        if (j == b.den_.size() || (i < a.den_.size() && a.den_[i].form < b.den_[j].form)) {
            common.push_back(a.den_[i++]);
        } else if (i == a.den_.size() || b.den_[j].form < a.den_[i].form) {
            common.push_back(b.den_[j++]);
        } else {
            common.push_back({a.den_[i].form, std::max(a.den_[i].exponent, b.den_[j].exponent)});
            ++i;
            ++j;
        }
    }
    auto lift = [&](const FactoredRational &f) {
        MultiPoly p = f.num_ * f.scalar_;
        std::size_t k = 0;
        for (const auto &c : common) {
            int have = 0;
            if (k < f.den_.size() && f.den_[k].form == c.form) have = f.den_[k++].exponent;
            if (c.exponent > have) p = p * c.form.to_poly(f.vars()).pow(static_cast<unsigned>(c.exponent - have));
        }
        return p;
    };
    FactoredRational r(lift(a) + lift(b), 1);
    if (!r.is_zero()) r.den_ = std::move(common);
    return r;
}

bool FactoredRational::equals(const FactoredRational &o) const
{
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    MultiPoly lhs = num_ * scalar_;
    MultiPoly rhs = o.num_ * o.scalar_;
    for (const auto &f : o.den_) lhs = lhs * f.form.to_poly(vars()).pow(static_cast<unsigned>(f.exponent));
    for (const auto &f : den_) rhs = rhs * f.form.to_poly(vars()).pow(static_cast<unsigned>(f.exponent));
    return lhs == rhs;
}

std::string FactoredRational::dump() const
{
    std::string out = "scalar: " + to_string(scalar_) + "\nnumerator:\n";
    for (const auto &[m, c] : num_.terms()) {
        out += "  " + to_string(c);
        for (std::size_t i = 0; i < vars()->size(); ++i)
            if (m[i] > 0) out += " * " + vars()->name(i) + (m[i] > 1 ? "^" + std::to_string(m[i]) : "");
        out += "\n";
    }
    out += "factors:\n";
    for (const auto &f : den_) out += "  (" + f.form.to_string(*vars()) + ")^" + std::to_string(f.exponent) + "\n";
    return out;
}

} // namespace vsc
