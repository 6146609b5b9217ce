#include "vsc/rational.hpp"

#include "vsc/errors.hpp"

#include <cctype>

namespace vsc {

std::string to_string(const BigRational &r)
{
    return r.get_str();
}

namespace {

bool is_integer_literal(std::string_view s)
{
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

BigRational parse_rational(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+')
        throw UsageError("malformed rational: '" + std::string(text) + "'");
    std::string n(num);
    if (n.front() == '+') n.erase(0, 1);
    BigInt p(n, 10), q(std::string(den), 10);
    if (q == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
    BigRational r(p, q);
    r.canonicalize();
    return r;
}

BigInt factorial(unsigned n)
{
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

BigInt binomial(long n, long k)
{
    if (k < 0) return 0;
    BigInt r;
    if (n >= 0) {
        mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
        return r;
    }
    // C(n, k) = (-1)^k C(k - n - 1, k) for negative n.
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(k - n - 1), static_cast<unsigned long>(k));
    return (k % 2 == 0) ? r : BigInt(-r);
}

BigRational rational_pow(const BigRational &base, long exponent)
{
    if (exponent < 0) {
        if (base == 0) throw UsageError("zero to a negative power");
        return rational_pow(ratio(base.get_den(), base.get_num()), -exponent);
    }
    BigRational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
    r.canonicalize();
    return r;
}

} // namespace vsc
