#include "vsc/residue.hpp"

#include "vsc/errors.hpp"

#include <algorithm>
#include <numeric>

namespace vsc {

MultiPoly kernel_w_poly(const VarSpacePtr &vars, int a, int d, std::size_t z, std::size_t w)
{
    if (a < 0) throw UsageError("kernel_w requires a >= 0");
    MultiPoly p(vars);
    for (int i = 0; i < a; ++i) {
        Monomial m;
        m.set(z, static_cast<unsigned>(i));
        Monomial mw;
        mw.set(w, static_cast<unsigned>(a - 1 - i));
        p.add_term(m * mw, d);
    }
    return p;
}

FactoredRational kernel_w(const VarSpacePtr &vars, int a, int d, std::size_t z, std::size_t w)
{
    return FactoredRational(kernel_w_poly(vars, a, d, z, w));
}

MultiPoly kernel_e(const VarSpacePtr &vars, int k, std::size_t z, std::size_t w)
{
    if (k < 1) throw UsageError("kernel_e requires k >= 1");
    MultiPoly p = MultiPoly::constant(vars, 1);
    for (int j = 0; j <= k; ++j) {
        MultiPoly f = MultiPoly::variable(vars, z) * BigRational(j) + MultiPoly::variable(vars, w) * BigRational(k - j);
        p = p * f;
    }
    return p;
}

MonomialKernel kernel_f(int N, int k, int d)
{
    if (k % 2 == 0) throw UsageError("kernel_f requires odd k");
    if (d < 1) throw UsageError("kernel_f requires d >= 1");
    const long m = 2L * d - 1;
    MonomialKernel r{ratio(2, m), 0};
    const int top = k * d - (k + 1) / 2;
    for (int j = 0; j <= top; ++j) r.scalar *= ratio(k * m - 2L * j, m);
    for (int j = 1; j <= d - 1; ++j) r.scalar /= rational_pow(ratio(m - 2L * j, m), N);
    r.degree = top + 1 - N * (d - 1);
    return r;
}

FactoredRational kernel_f(const VarSpacePtr &vars, int N, int k, int d, std::size_t z)
{
    const MonomialKernel kf = kernel_f(N, k, d);
    FactoredRational f(MultiPoly::variable(vars, z, static_cast<unsigned>(std::max(kf.degree, 0))), kf.scalar);
    if (kf.degree < 0) f.divide_by_variable(z, -kf.degree);
    return f;
}

RadiusProfile default_radii(int d, Sector sector)
{
    if (d < 1) throw UsageError("degree must be positive");
    RadiusProfile p;
    if (sector == Sector::Closed) {
        for (int j = 0; j <= d; ++j) p.radii.emplace_back(2 * (d + 1) * (d + 1) - (2 * j - d) * (2 * j - d));
    } else {
        for (int j = 0; j < d; ++j) p.radii.emplace_back(2 * d * d - (2 * j - d + 1) * (2 * j - d + 1));
    }
    return p;
}

bool admissible_radii(const RadiusProfile &p, Sector sector)
{
    const auto &r = p.radii;
    for (const auto &x : r)
        if (x <= 0) return false;
    const std::size_t n = r.size();
    const std::size_t interior_end = sector == Sector::Closed ? n - 1 : (n >= 1 ? n - 1 : 0);
    for (std::size_t j = 1; j < interior_end; ++j)
        if (2 * r[j] <= r[j - 1] + r[j + 1]) return false;
    if (sector == Sector::Open && n >= 2 && 3 * r[n - 1] <= r[n - 2]) return false;
    return true;
}

RadiusProfile perturb_radii(const RadiusProfile &p, Sector sector, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<long> step(-25, 25);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        RadiusProfile q = p;
        for (auto &r : q.radii) r *= ratio(1000 + step(rng), 1000);
        if (admissible_radii(q, sector)) return q;
    }
    return p;
}

namespace {

std::string bound_text(const BigRational &r)
{
    return to_string(r);
}

struct Substituted {
    bool vanishes = false;
    std::vector<BigRational> coeffs; // form with var replaced by root
};

Substituted substitute_root(const LinearForm &form, std::size_t var, const std::vector<BigRational> &root)
{
    Substituted s;
    const BigRational &cv = form.coeff(var);
    s.coeffs.resize(form.size());
    bool all_zero = true;
    for (std::size_t i = 0; i < form.size(); ++i) {
        if (i == var) continue;
        s.coeffs[i] = form.coeff(i) + cv * root[i];
        if (s.coeffs[i] != 0) all_zero = false;
    }
    s.vanishes = all_zero;
    return s;
}

} // namespace

std::vector<Pole> plan_poles(const FactoredRational &f, std::size_t var, const RadiusProfile &profile)
{
    const std::size_t n = f.vars()->size();
    if (var >= n) throw UsageError("residue variable out of range");
    if (profile.radii.size() != n) throw UsageError("radius profile does not match variables");
    std::vector<Pole> poles;
    for (const auto &fac : f.denominator()) {
        const BigRational &cv = fac.form.coeff(var);
        if (cv == 0) continue;
        Pole p;
        p.order = fac.exponent;
        p.root.resize(n);
        BigRational sum = 0, biggest = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == var) continue;
            if (fac.form.coeff(i) == 0) continue;
            p.root[i] = -fac.form.coeff(i) / cv;
            BigRational m = abs(p.root[i]) * profile.radii[i];
            sum += m;
            biggest = std::max(biggest, m);
        }
        const BigRational &r = profile.radii[var];
        if (sum < r) {
            poles.push_back(std::move(p));
            continue;
        }
        BigRational lower = 2 * biggest - sum;
        if (lower < 0) lower = 0;
        if (lower > r) continue;
        throw IndecisivePole(fac.form.to_string(*f.vars()), bound_text(lower), bound_text(sum), bound_text(r));
    }
    return poles;
}

FactoredRational residue_at(const FactoredRational &f, std::size_t var, const std::vector<BigRational> &root)
{
    const VarSpacePtr &vars = f.vars();
    const std::size_t n = vars->size();
    if (root.size() != n || root[var] != 0) throw UsageError("malformed pole root");
    if (f.is_zero()) return f;

    struct Moving {
        LinearForm form;
        BigRational lambda; // substituted form = lambda · form
        BigRational slope;  // coefficient of var
        int exponent;
    };
    int order = 0;
    BigRational lead;
    std::vector<Moving> moving;
    std::vector<DenominatorFactor> carried;
    for (const auto &fac : f.denominator()) {
        const BigRational &cv = fac.form.coeff(var);
        if (cv == 0) {
            carried.push_back(fac);
            continue;
        }
        Substituted s = substitute_root(fac.form, var, root);
        if (s.vanishes) {
            order = fac.exponent;
            lead = cv;
            continue;
        }
        auto [form, lambda] = LinearForm::normalize(std::move(s.coeffs));
        moving.push_back({std::move(form), std::move(lambda), cv, fac.exponent});
    }
    if (order == 0) return FactoredRational::zero(vars);
    const std::size_t K = static_cast<std::size_t>(order - 1);

    // Taylor coefficients in u of the numerator at var = root + u.
    std::vector<MultiPoly> series(K + 1, MultiPoly(vars));
    {
        const auto parts = f.numerator().split_by(var);
        std::vector<BigRational> rc = root;
        const MultiPoly rho = MultiPoly::linear(vars, rc);
        const bool at_origin = rho.is_zero();
        std::vector<MultiPoly> rho_pow{MultiPoly::constant(vars, 1)};
        for (std::size_t e = 0; e < parts.size(); ++e) {
            if (parts[e].is_zero()) continue;
            for (std::size_t k = 0; k <= std::min(K, e); ++k) {
                if (at_origin) {
                    if (k == e) series[k] += parts[e];
                    continue;
                }
                while (rho_pow.size() <= e - k) rho_pow.push_back(rho_pow.back() * rho);
                MultiPoly term = parts[e] * BigRational(binomial(static_cast<long>(e), static_cast<long>(k)));
                series[k].add_product(term, rho_pow[e - k]);
            }
        }
    }

    BigRational scalar = f.scalar() / rational_pow(lead, order);
    // Each moving factor (λA + c u)^{-e} over the common denominator A^{e+K}.
    for (std::size_t idx = 0; idx < moving.size(); ++idx) {
        const auto &mv = moving[idx];
        scalar /= rational_pow(mv.lambda, mv.exponent);
        if (K == 0) continue;
        const MultiPoly A = mv.form.to_poly(vars);
        const BigRational ratio_c = -mv.slope / mv.lambda;
        std::vector<MultiPoly> t;
        t.reserve(K + 1);
        std::vector<MultiPoly> a_pow{MultiPoly::constant(vars, 1)};
        for (std::size_t k = 1; k <= K; ++k) a_pow.push_back(a_pow.back() * A);
        for (std::size_t k = 0; k <= K; ++k) {
            BigRational c = BigRational(binomial(mv.exponent + static_cast<long>(k) - 1, static_cast<long>(k)))
                            * rational_pow(ratio_c, static_cast<long>(k));
            t.push_back(a_pow[K - k] * c);
        }
        const bool last = idx + 1 == moving.size();
        std::vector<MultiPoly> next(K + 1, MultiPoly(vars));
        for (std::size_t j = last ? K : 0; j <= K; ++j)
            for (std::size_t k = 0; k <= j; ++k)
                if (!series[j - k].is_zero()) next[j].add_product(series[j - k], t[k]);
        series = std::move(next);
    }

    FactoredRational result(std::move(series[K]), scalar);
    if (result.is_zero()) return result;
    for (const auto &c : carried) {
        std::vector<BigRational> coeffs = c.form.coeffs();
        result.divide_by(coeffs, c.exponent);
    }
    for (const auto &mv : moving) result.divide_by(mv.form.coeffs(), mv.exponent + static_cast<int>(K));
    return result;
}

FactoredRational residue_stage(const FactoredRational &f, std::size_t var, const RadiusProfile &profile)
{
    if (f.is_zero()) return f;
    for (const auto &fac : f.denominator())
        if (fac.exponent <= 0) throw RepresentationError("non-positive denominator exponent");
    FactoredRational total = FactoredRational::zero(f.vars());
    for (const auto &pole : plan_poles(f, var, profile)) total = fr_add(total, residue_at(f, var, pole.root));
    return total;
}

BigRational iterated_residue(const FactoredRational &f, const RadiusProfile &profile, std::vector<std::size_t> order)
{
    const std::size_t n = f.vars()->size();
    if (order.empty()) {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
    }
    std::vector<std::size_t> check = order;
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < check.size(); ++i)
        if (check.size() != n || check[i] != i) throw UsageError("order must be a permutation of the variables");
    FactoredRational g = f;
    for (std::size_t var : order) {
        g = residue_stage(g, var, profile);
        if (g.is_zero()) return 0;
    }
    return g.constant_value();
}

BigRational iterated_residue_retrying(const FactoredRational &f, const RadiusProfile &profile, Sector sector,
                                      int retry_limit, std::vector<std::size_t> order)
{
    std::mt19937_64 rng(0x5eed);
    RadiusProfile p = profile;
    for (int attempt = 0;; ++attempt) {
        try {
            return iterated_residue(f, p, order);
        } catch (const IndecisivePole &) {
            if (attempt >= retry_limit) throw;
            p = perturb_radii(profile, sector, rng);
        }
    }
}

} // namespace vsc
