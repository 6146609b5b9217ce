#include "vsc/localization.hpp"

#include "vsc/errors.hpp"

#include <json.hpp>

#include <sstream>
#include <thread>

namespace vsc {

namespace {

// One residue integral of the localization sum over z_0..z_{L-1}.
struct LocalizationTerm {
    std::size_t vars = 1;
    int kernel_degree = 1;          // uses f_{2e-1}
    BigRational scalar = 1;
    std::vector<int> z_exponent;    // on top of the z_j^{-N} measure
    std::vector<std::pair<std::size_t, std::size_t>> kernel_e_pairs;
    std::vector<BigRational> difference; // numerator linear factor, empty if none
    std::vector<std::vector<BigRational>> forms;
    // moving[i]: index into forms whose root is a pole of z_i, or -1.
    std::vector<int> moving;
    BigRational unit_weight = 1;    // operator factor (unit_weight/2) z_0^{m-1} + Σ w_m(pairs)
    std::vector<std::pair<std::size_t, std::size_t>> w_pairs;
};

std::vector<BigRational> coeffs(std::initializer_list<long> c)
{
    std::vector<BigRational> v;
    for (long x : c) v.emplace_back(x);
    return v;
}

std::vector<LocalizationTerm> localization_terms(int d, int k)
{
    const BigRational invk = ratio(1, k);
    std::vector<LocalizationTerm> terms;
    // Single-vertex term, present for every d.
    LocalizationTerm t1;
    t1.vars = 1;
    t1.kernel_degree = d;
    t1.scalar = ratio(2, 2 * d - 1);
    t1.z_exponent = {1};
    t1.moving = {-1};
    t1.unit_weight = 2 * d - 1;
    terms.push_back(t1);
    if (d >= 2) {
        LocalizationTerm t;
        t.vars = 2;
        t.kernel_degree = d - 1;
        t.scalar = invk;
        t.z_exponent = {-1, 0};
        t.kernel_e_pairs = {{0, 1}};
        t.difference = coeffs({-1, 1});
        t.forms = {d == 2 ? coeffs({3, -1}) : std::vector<BigRational>{ratio(5, 3), BigRational(-1)}};
        t.moving = {-1, -1};
        t.unit_weight = 2 * d - 3;
        t.w_pairs = {{0, 1}};
        terms.push_back(t);
    }
    if (d == 3) {
        LocalizationTerm t;
        t.vars = 3;
        t.kernel_degree = 1;
        t.scalar = invk * invk;
        t.z_exponent = {-1, -1, 0};
        t.kernel_e_pairs = {{0, 1}, {1, 2}};
        t.difference = coeffs({0, -1, 1});
        t.forms = {coeffs({3, -1, 0}), coeffs({-1, 2, -1})};
        t.moving = {-1, 1, -1};
        t.w_pairs = {{0, 1}, {1, 2}};
        terms.push_back(t);

        LocalizationTerm u;
        u.vars = 3;
        u.kernel_degree = 1;
        u.scalar = ratio(1, 2) * invk * invk * ratio(1, 2);
        u.z_exponent = {-3, 0, 0};
        u.kernel_e_pairs = {{0, 1}, {0, 2}};
        u.moving = {-1, -1, -1};
        u.w_pairs = {{0, 1}, {0, 2}};
        terms.push_back(u);
    }
    return terms;
}

FactoredRational build_term(const LocalizationTerm &t, int N, int k, const InsertionProfile &insertions)
{
    const auto vars = residue_varspace(t.vars);
    const MonomialKernel kf = kernel_f(N, k, t.kernel_degree);
    std::vector<int> z_exp(t.vars, -N);
    for (std::size_t i = 0; i < t.vars; ++i) z_exp[i] += t.z_exponent[i];
    z_exp[0] += kf.degree;
    BigRational scalar = t.scalar * kf.scalar;
    MultiPoly num = MultiPoly::constant(vars, 1);
    for (const auto &[a, b] : t.kernel_e_pairs) num = num * kernel_e(vars, k, a, b);
    if (!t.difference.empty()) num = num * MultiPoly::linear(vars, t.difference);
    for (const auto &[m, mult] : insertions) {
        if (m == 0) {
            // w_0 = 0, so only the boundary part (c/2) z_0^{-1} survives.
            scalar *= rational_pow(t.unit_weight / 2, mult);
            z_exp[0] -= mult;
            continue;
        }
        MultiPoly factor = MultiPoly::variable(vars, 0, static_cast<unsigned>(m - 1)) * (t.unit_weight / 2);
        for (const auto &[a, b] : t.w_pairs) factor += kernel_w_poly(vars, m, 1, a, b);
        num = num * factor.pow(static_cast<unsigned>(mult));
    }
    std::vector<int> den_exp(t.vars, 0);
    for (std::size_t i = 0; i < t.vars; ++i) {
        if (z_exp[i] >= 0) {
            Monomial mono;
            mono.set(i, static_cast<unsigned>(z_exp[i]));
            num = num.mul_monomial(mono, 1);
        } else {
            den_exp[i] = -z_exp[i];
        }
    }
    FactoredRational f(std::move(num), scalar);
    for (std::size_t i = 0; i < t.vars; ++i)
        if (den_exp[i] > 0) f.divide_by_variable(i, den_exp[i]);
    for (const auto &form : t.forms) f.divide_by(form);
    return f;
}

struct Branch {
    FactoredRational f;
    std::vector<std::vector<BigRational>> forms;
};

// Ascending residues at z_i = 0 and, when z_i owns a moving factor, at its root after earlier substitutions.
BigRational evaluate_term(const LocalizationTerm &t, FactoredRational f)
{
    std::vector<Branch> branches{{std::move(f), t.forms}};
    for (std::size_t i = 0; i < t.vars; ++i) {
        std::vector<Branch> next;
        for (const Branch &b : branches) {
            std::vector<std::vector<BigRational>> roots{std::vector<BigRational>(t.vars)};
            if (t.moving[i] >= 0) {
                const auto &form = b.forms[static_cast<std::size_t>(t.moving[i])];
                if (form[i] != 0) {
                    std::vector<BigRational> root(t.vars);
                    for (std::size_t j = 0; j < t.vars; ++j)
                        if (j != i) root[j] = -form[j] / form[i];
                    roots.push_back(std::move(root));
                }
            }
            for (const auto &root : roots) {
                FactoredRational r = residue_at(b.f, i, root);
                if (r.is_zero()) continue;
                Branch nb{std::move(r), b.forms};
                for (auto &form : nb.forms) {
                    const BigRational c = form[i];
                    if (c == 0) continue;
                    for (std::size_t j = 0; j < t.vars; ++j) form[j] += c * root[j];
                    form[i] = 0;
                }
                next.push_back(std::move(nb));
            }
        }
        branches = std::move(next);
    }
    BigRational sum = 0;
    for (const Branch &b : branches) sum += b.f.constant_value();
    return sum;
}

} // namespace

BigRational disk_invariant_localization(int N, int k, int d, const InsertionProfile &insertions)
{
    if (d < 1) throw UsageError("degree must be >= 1");
    if (d > 3) throw UnsupportedError("the localization formulas are available up to d = 3");
    if (k % 2 == 0) throw UsageError("open invariants need odd k");
    for (const auto &[j, m] : insertions)
        if (j < 0 || m < 0) throw UsageError("insertions need j >= 0 and m >= 0");
    BigRational total = 0;
    for (const auto &t : localization_terms(d, k)) total += evaluate_term(t, build_term(t, N, k, insertions));
    return total;
}

namespace {

struct Complex {
    BigFloat re, im;
};

Complex operator*(const Complex &a, const Complex &b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

Complex &operator+=(Complex &a, const Complex &b)
{
    a.re += b.re;
    a.im += b.im;
    return a;
}

Complex inverse(const Complex &a)
{
    const BigFloat n = a.re * a.re + a.im * a.im;
    return {a.re / n, -a.im / n};
}

BigFloat to_float(const BigRational &q)
{
    return BigFloat(q.get_num_mpz_t()) / BigFloat(q.get_den_mpz_t());
}

void check_off_contour(const FactoredRational &f, const RadiusProfile &p)
{
    for (const auto &fac : f.denominator()) {
        BigRational sum = 0, top = 0;
        for (std::size_t i = 0; i < fac.form.size(); ++i) {
            const BigRational m = abs(fac.form.coeff(i)) * p.radii[i];
            sum += m;
            top = std::max(top, m);
        }
        if (2 * top - sum <= 0)
            throw UsageError("denominator " + fac.form.to_string(*f.vars()) +
                             " may vanish on the polycircle; adjust the radii");
    }
}

// Trapezoidal value on an n-point grid per circle.
Complex trapezoid(const QuadratureSpec &spec, int n)
{
    const FactoredRational &f = spec.integrand;
    const std::size_t L = f.vars()->size();
    const unsigned bits = static_cast<unsigned>(spec.digits);
    BigFloat::default_precision(bits);
    unsigned max_exp = 1;
    for (const auto &[m, c] : f.numerator().terms())
        for (std::size_t i = 0; i < L; ++i) max_exp = std::max(max_exp, m[i] + 1);

    // powers[i][p][e] = z_i^e at grid point p.
    std::vector<std::vector<std::vector<Complex>>> powers(L);
    BigFloat two_pi;
    mpfr_const_pi(two_pi.backend().data(), MPFR_RNDN);
    two_pi *= 2;
    for (std::size_t i = 0; i < L; ++i) {
        powers[i].resize(static_cast<std::size_t>(n));
        const BigFloat r = to_float(spec.profile.radii[i]);
        for (int p = 0; p < n; ++p) {
            BigFloat theta = BigFloat(two_pi) * p / n;
            Complex z{r * cos(theta), r * sin(theta)};
            auto &row = powers[i][static_cast<std::size_t>(p)];
            row.push_back({BigFloat(1), BigFloat(0)});
            for (unsigned e = 1; e <= max_exp; ++e) row.push_back(row.back() * z);
        }
    }
    std::vector<std::pair<Monomial, BigFloat>> num;
    for (const auto &[m, c] : f.numerator().terms()) num.emplace_back(m, to_float(c));
    std::vector<std::pair<std::vector<BigFloat>, int>> den;
    for (const auto &fac : f.denominator()) {
        std::vector<BigFloat> c;
        for (std::size_t i = 0; i < L; ++i) c.push_back(to_float(fac.form.coeff(i)));
        den.emplace_back(std::move(c), fac.exponent);
    }
    std::vector<std::size_t> order = spec.order;
    if (order.empty())
        for (std::size_t i = 0; i < L; ++i) order.push_back(i);

    const std::size_t outer = static_cast<std::size_t>(n);
    std::size_t inner_count = 1;
    for (std::size_t s = 1; s < L; ++s) inner_count *= static_cast<std::size_t>(n);
    std::vector<Complex> partial(outer, Complex{BigFloat(0), BigFloat(0)});

    auto run = [&](std::size_t lo, std::size_t hi) {
        BigFloat::default_precision(bits);
        std::vector<std::size_t> idx(L);
        for (std::size_t o = lo; o < hi; ++o) {
            Complex acc{BigFloat(0), BigFloat(0)};
            for (std::size_t c = 0; c < inner_count; ++c) {
                idx[order[0]] = o;
                std::size_t rest = c;
                for (std::size_t s = L; s-- > 1;) {
                    idx[order[s]] = rest % outer;
                    rest /= outer;
                }
                Complex numv{BigFloat(0), BigFloat(0)};
                for (const auto &[m, coeff] : num) {
                    Complex term{coeff, BigFloat(0)};
                    for (std::size_t i = 0; i < L; ++i)
                        if (m[i]) term = term * powers[i][idx[i]][m[i]];
                    numv += term;
                }
                Complex denv{BigFloat(1), BigFloat(0)};
                for (const auto &[c_form, e] : den) {
                    Complex lin{BigFloat(0), BigFloat(0)};
                    for (std::size_t i = 0; i < L; ++i)
                        if (c_form[i] != 0) lin += Complex{c_form[i], BigFloat(0)} * powers[i][idx[i]][1];
                    for (int r = 0; r < e; ++r) denv = denv * lin;
                }
                // dz_i / (2πi) = z_i dθ / 2π.
                Complex jac{BigFloat(1), BigFloat(0)};
                for (std::size_t i = 0; i < L; ++i) jac = jac * powers[i][idx[i]][1];
                acc += numv * inverse(denv) * jac;
            }
            partial[o] = acc;
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(spec.threads, static_cast<unsigned>(outer)));
    if (threads == 1) {
        run(0, outer);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (outer + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(run, std::min(outer, t * chunk), std::min(outer, (t + 1) * chunk));
    }
    Complex total{BigFloat(0), BigFloat(0)};
    for (const auto &p : partial) total += p;
    const BigFloat scale = pow(BigFloat(n), static_cast<long>(L));
    return {total.re * to_float(f.scalar()) / scale, total.im * to_float(f.scalar()) / scale};
}

BigFloat distance(const Complex &a, const Complex &b)
{
    const BigFloat dr = a.re - b.re, di = a.im - b.im;
    return sqrt(dr * dr + di * di);
}

} // namespace

RadiusProfile steep_radii(int d)
{
    RadiusProfile p;
    for (int j = 0; j <= d; ++j) p.radii.emplace_back(1 + 16 * j * (d - j));
    return p;
}

QuadratureResult contour_quadrature(const QuadratureSpec &spec)
{
    const int n = spec.points;
    if (n < 8 || (n & (n - 1)) != 0) throw UsageError("points per circle must be a power of two >= 8");
    if (spec.digits < 30) throw UsageError("working precision must be at least 30 digits");
    const std::size_t L = spec.integrand.vars()->size();
    if (spec.profile.radii.size() != L) throw UsageError("radius profile does not match the integrand");
    if (!spec.order.empty()) {
        std::vector<std::size_t> check = spec.order;
        std::sort(check.begin(), check.end());
        for (std::size_t i = 0; i < check.size(); ++i)
            if (check.size() != L || check[i] != i) throw UsageError("order must be a permutation of the variables");
    }
    check_off_contour(spec.integrand, spec.profile);
    BigFloat::default_precision(static_cast<unsigned>(spec.digits));
    const Complex v4 = trapezoid(spec, n / 4);
    const Complex v2 = trapezoid(spec, n / 2);
    const Complex v1 = trapezoid(spec, n);
    QuadratureResult r;
    r.real = v1.re;
    r.imag = v1.im;
    r.points = n;
    r.digits = spec.digits;
    const BigFloat magnitude = abs(v1.re) + abs(v1.im);
    const BigFloat floor_err = pow(BigFloat(10), -(spec.digits - 5)) * std::max(BigFloat(1), magnitude);
    const BigFloat err = distance(v1, v2), prev = distance(v2, v4);
    r.error = std::max(err, floor_err);
    r.converged = err <= floor_err || err < prev;
    return r;
}

std::string QuadratureResult::to_json() const
{
    nlohmann::json j;
    j["real"] = real.str(digits);
    j["imag"] = imag.str(digits);
    j["error"] = error.str(6, std::ios_base::scientific);
    j["converged"] = converged;
    j["points"] = points;
    j["digits"] = digits;
    return j.dump(2);
}

} // namespace vsc
