#ifndef VSC_GRADED_SERIES_HPP
#define VSC_GRADED_SERIES_HPP

#include "vsc/multipoly.hpp"

#include <compare>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vsc {

// Exact n/2.
struct HalfInt {
    int twice = 0;

    static constexpr HalfInt from_int(int n) { return HalfInt{2 * n}; }
    static constexpr HalfInt halves(int n) { return HalfInt{n}; }
    // "3", "3/2", "-1/2"
    static HalfInt parse(std::string_view text);

    bool is_integer() const { return twice % 2 == 0; }
    BigRational to_rational() const { return ratio(twice, 2); }
    // Smallest integer >= value.
    int ceil() const { return twice >= 0 ? (twice + 1) / 2 : twice / 2; }
    int floor() const { return twice >= 0 ? twice / 2 : -((-twice + 1) / 2); }
    std::string to_string() const;

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt{a.twice + b.twice}; }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt{a.twice - b.twice}; }
    friend constexpr bool operator==(HalfInt, HalfInt) = default;
    friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
};

// The class index whose coupling is folded into the grading variable q = e^{x^1}.
inline constexpr int kLogClass = 1;

// Truncated series in couplings x^j (j from an explicit class list) with half-integer powers of q.
// Only terms with q-degree <= dmax are kept.
class GradedSeries {
public:
    struct Key {
        HalfInt q;
        Monomial x;
        friend bool operator==(const Key &, const Key &) = default;
        friend auto operator<=>(const Key &, const Key &) = default;
    };
    using Terms = std::map<Key, BigRational>;

    GradedSeries(std::vector<int> classes, HalfInt dmax);
    static GradedSeries constant(std::vector<int> classes, HalfInt dmax, const BigRational &c);
    // The coupling x^j itself.
    static GradedSeries coupling(std::vector<int> classes, HalfInt dmax, int j);

    const std::vector<int> &classes() const { return classes_; }
    HalfInt dmax() const { return dmax_; }
    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    // Position of class j in the exponent vector; throws UsageError if absent.
    std::size_t slot(int j) const;
    bool has_class(int j) const;

    // Terms with q-degree above dmax are silently dropped.
    void add_term(HalfInt q, const Monomial &x, const BigRational &c);
    // Monomial from class exponents, e.g. {{2, 3}} for (x^2)^3.
    static Monomial monomial_of(const GradedSeries &s, const std::map<int, unsigned> &exponents);
    // Coefficient at q^d Π (x^j)^{e_j}; BoundError if d exceeds the truncation.
    BigRational coefficient(HalfInt q, const std::map<int, unsigned> &exponents) const;
    HalfInt min_degree() const;

    GradedSeries &operator+=(const GradedSeries &o);
    GradedSeries &operator-=(const GradedSeries &o);
    GradedSeries &operator*=(const BigRational &c);
    friend GradedSeries operator+(GradedSeries a, const GradedSeries &b) { return a += b; }
    friend GradedSeries operator-(GradedSeries a, const GradedSeries &b) { return a -= b; }
    friend GradedSeries operator*(GradedSeries a, const BigRational &c) { return a *= c; }
    friend bool operator==(const GradedSeries &a, const GradedSeries &b);

    // Product truncated at `bound` (which must not exceed either operand's dmax).
    static GradedSeries mul_truncated(const GradedSeries &a, const GradedSeries &b, HalfInt bound);
    GradedSeries truncated(HalfInt bound) const;
    // Same terms over a superset of classes.
    GradedSeries embedded(const std::vector<int> &classes) const;
    // Set coupling x^j to zero.
    GradedSeries slice_zero(int j) const;
    // Terms of one q-degree.
    GradedSeries at_degree(HalfInt q) const;
    // d/dx^j; for the log class also adds q d/dq.
    GradedSeries derivative(int j) const;
    // exp(c · s) for s without q^0 terms.
    static GradedSeries exp_scaled(const GradedSeries &s, const BigRational &c);

private:
    void check_same(const GradedSeries &o) const;

    std::vector<int> classes_;
    HalfInt dmax_;
    Terms terms_;
};

GradedSeries series_mul(const GradedSeries &a, const GradedSeries &b);

// Rendering symbols: grading variable name and coupling prefix ("q","x") or ("Q","t").
struct SeriesSymbols {
    std::string q = "q";
    std::string var = "x";
};

// Canonical form "c * q^{3/2} * x0 * x2^3 + ..." (every coefficient printed, " + " separated).
std::string to_canonical_text(const GradedSeries &s, const SeriesSymbols &sym = {});
GradedSeries parse_canonical_text(std::string_view text, std::vector<int> classes, HalfInt dmax,
                                  const SeriesSymbols &sym = {});
// Human form "x2 + 34138908 q - 5/12 x2^4 q".
std::string to_compact_text(const GradedSeries &s, const SeriesSymbols &sym = {});
std::string to_csv(const GradedSeries &s, const SeriesSymbols &sym = {});
std::string degree_text(HalfInt q, const std::string &symbol);

} // namespace vsc

#endif
