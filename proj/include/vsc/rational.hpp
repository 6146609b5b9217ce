#ifndef VSC_RATIONAL_HPP
#define VSC_RATIONAL_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace vsc {

using BigInt = mpz_class;
// GMP keeps mpq_class canonical (reduced, positive denominator) after every arithmetic operation.
using BigRational = mpq_class;

// "p/q", or "p" when q = 1.
std::string to_string(const BigRational &r);

// Accepts "p", "p/q", with optional sign; throws UsageError on malformed input or zero denominator.
BigRational parse_rational(std::string_view text);

BigInt factorial(unsigned n);

// Generalized binomial coefficient C(n, k) for any integer n and k >= 0.
BigInt binomial(long n, long k);

BigRational rational_pow(const BigRational &base, long exponent);

// Canonical p/q (mpq_class's two-argument constructor does not reduce).
inline BigRational ratio(long p, long q)
{
    BigRational r(p, q);
    r.canonicalize();
    return r;
}

inline BigRational ratio(const BigInt &p, const BigInt &q)
{
    BigRational r(p, q);
    r.canonicalize();
    return r;
}

} // namespace vsc

#endif
