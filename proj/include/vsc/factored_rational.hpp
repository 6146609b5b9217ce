#ifndef VSC_FACTORED_RATIONAL_HPP
#define VSC_FACTORED_RATIONAL_HPP

#include "vsc/multipoly.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vsc {

// Homogeneous linear form Σ c_i z_i, normalized so its first nonzero coefficient is 1.
class LinearForm {
public:
    // Returns the normalized form together with the scalar λ such that coeffs = λ · form.
    static std::pair<LinearForm, BigRational> normalize(std::vector<BigRational> coeffs);
    // The form z_i.
    static LinearForm coordinate(std::size_t n, std::size_t i);

    const std::vector<BigRational> &coeffs() const { return c_; }
    const BigRational &coeff(std::size_t i) const { return c_[i]; }
    std::size_t size() const { return c_.size(); }
    bool involves(std::size_t var) const { return c_[var] != 0; }
    // True for the coordinate form z_var.
    bool is_coordinate(std::size_t var) const;

    MultiPoly to_poly(const VarSpacePtr &vars) const;
    std::string to_string(const VarSpace &vars) const;

    friend bool operator==(const LinearForm &a, const LinearForm &b) { return a.c_ == b.c_; }
    friend bool operator<(const LinearForm &a, const LinearForm &b);

private:
    std::vector<BigRational> c_;
};

struct DenominatorFactor {
    LinearForm form;
    int exponent = 0;
};

// scalar · numerator / Π form^exponent, with forms normalized and pairwise non-proportional.
class FactoredRational {
public:
    explicit FactoredRational(MultiPoly numerator, BigRational scalar = 1);
    static FactoredRational zero(VarSpacePtr vars);

    const VarSpacePtr &vars() const { return num_.vars(); }
    const BigRational &scalar() const { return scalar_; }
    const MultiPoly &numerator() const { return num_; }
    const std::vector<DenominatorFactor> &denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    // Divide by (Σ coeffs_i z_i)^exponent; the form's scalar is folded into scalar().
    FactoredRational &divide_by(const std::vector<BigRational> &coeffs, int exponent = 1);
    FactoredRational &divide_by_variable(std::size_t var, int exponent = 1);
    FactoredRational &multiply_by(const MultiPoly &p);
    FactoredRational &scale(const BigRational &c);

    // Numerator degree minus total denominator exponent, if the numerator is homogeneous.
    std::optional<int> homogeneity_degree() const;
    // Exact-division cancellation of denominator forms against the numerator.
    void cancel();
    // Scalar value of a function with no variable dependence left.
    BigRational constant_value() const;

    // Cross-multiplied equality of rational functions.
    bool equals(const FactoredRational &o) const;

    // Debug dump: scalar, numerator term list and factor list, one item per line.
    std::string dump() const;

private:
    friend FactoredRational fr_mul(const FactoredRational &, const FactoredRational &);
    friend FactoredRational fr_add(const FactoredRational &, const FactoredRational &);

    void insert_factor(const LinearForm &f, int exponent);
    void normalize_zero();

    BigRational scalar_;
    MultiPoly num_;
    std::vector<DenominatorFactor> den_; // sorted by form
};

FactoredRational fr_mul(const FactoredRational &a, const FactoredRational &b);
FactoredRational fr_add(const FactoredRational &a, const FactoredRational &b);

// Exact quotient of p by a linear form if it divides p.
std::optional<MultiPoly> divide_exact(const MultiPoly &p, const LinearForm &form);

} // namespace vsc

#endif
