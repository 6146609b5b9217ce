#ifndef VSC_MULTIPOLY_HPP
#define VSC_MULTIPOLY_HPP

#include "vsc/rational.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vsc {

inline constexpr std::size_t kMaxVars = 12;

// Exponent vector over a VarSpace; unused slots stay zero.
class Monomial {
public:
    Monomial() = default;

    unsigned operator[](std::size_t i) const { return e_[i]; }
    void set(std::size_t i, unsigned e);
    unsigned degree() const;

    Monomial operator*(const Monomial &o) const;
    // Precondition: o divides *this.
    Monomial operator/(const Monomial &o) const;
    bool divisible_by(const Monomial &o) const;

    friend bool operator==(const Monomial &, const Monomial &) = default;
    friend auto operator<=>(const Monomial &, const Monomial &) = default;

private:
    std::array<std::uint16_t, kMaxVars> e_{};
};

class VarSpace {
public:
    explicit VarSpace(std::vector<std::string> names);

    std::size_t size() const { return names_.size(); }
    const std::string &name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string> &names() const { return names_; }
    std::optional<std::size_t> index_of(const std::string &name) const;

    friend bool operator==(const VarSpace &, const VarSpace &) = default;

private:
    std::vector<std::string> names_;
};

using VarSpacePtr = std::shared_ptr<const VarSpace>;

VarSpacePtr make_varspace(std::vector<std::string> names);
// z0, z1, ..., z{n-1}
VarSpacePtr residue_varspace(std::size_t n);

class MultiPoly {
public:
    using Terms = std::map<Monomial, BigRational>;

    explicit MultiPoly(VarSpacePtr vars);
    static MultiPoly constant(VarSpacePtr vars, const BigRational &c);
    static MultiPoly variable(VarSpacePtr vars, std::size_t i, unsigned power = 1);
    // Σ c_i z_i.
    static MultiPoly linear(VarSpacePtr vars, const std::vector<BigRational> &coeffs);

    const VarSpacePtr &vars() const { return vars_; }
    const Terms &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    // Constant term when the polynomial has no variable dependence.
    std::optional<BigRational> as_constant() const;

    void add_term(const Monomial &m, const BigRational &c);

    MultiPoly &operator+=(const MultiPoly &o);
    MultiPoly &operator-=(const MultiPoly &o);
    MultiPoly &operator*=(const BigRational &c);
    MultiPoly operator-() const;
    friend MultiPoly operator+(MultiPoly a, const MultiPoly &b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly &b) { return a -= b; }
    friend MultiPoly operator*(MultiPoly a, const BigRational &c) { return a *= c; }
    friend MultiPoly operator*(const MultiPoly &a, const MultiPoly &b);
    friend bool operator==(const MultiPoly &a, const MultiPoly &b);

    // *this += a * b without materializing the product.
    void add_product(const MultiPoly &a, const MultiPoly &b);
    MultiPoly mul_monomial(const Monomial &m, const BigRational &c) const;
    MultiPoly pow(unsigned n) const;

    // Total degree if homogeneous; nullopt for zero or mixed degrees.
    std::optional<unsigned> homogeneous_degree() const;
    unsigned degree_in(std::size_t var) const;
    // Coefficients P_e of var^e, with var removed from the monomials.
    std::vector<MultiPoly> split_by(std::size_t var) const;
    // Substitute var -> linear form (coeffs over the same VarSpace, coeff of var ignored).
    MultiPoly substitute_linear(std::size_t var, const std::vector<BigRational> &form) const;

    std::string to_string() const;

private:
    void check_same(const MultiPoly &o) const;

    VarSpacePtr vars_;
    Terms terms_;
};

MultiPoly poly_mul(const MultiPoly &a, const MultiPoly &b);

} // namespace vsc

#endif
