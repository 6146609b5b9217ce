#ifndef VSC_RESIDUE_HPP
#define VSC_RESIDUE_HPP

#include "vsc/factored_rational.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace vsc {

enum class Sector { Closed, Open };

// d (z^a - w^a)/(z - w) as a polynomial; zero for a = 0.
MultiPoly kernel_w_poly(const VarSpacePtr &vars, int a, int d, std::size_t z, std::size_t w);
FactoredRational kernel_w(const VarSpacePtr &vars, int a, int d, std::size_t z, std::size_t w);

// Π_{j=0}^{k} (j z + (k-j) w).
MultiPoly kernel_e(const VarSpacePtr &vars, int k, std::size_t z, std::size_t w);

// The single-variable kernel f^{N,k}_{2d-1}(z) = scalar · z^degree (degree may be negative).
struct MonomialKernel {
    BigRational scalar;
    int degree = 0;
};
MonomialKernel kernel_f(int N, int k, int d);
FactoredRational kernel_f(const VarSpacePtr &vars, int N, int k, int d, std::size_t z);

struct RadiusProfile {
    std::vector<BigRational> radii;
};

// Closed: z_0..z_d with r_j = 2(d+1)^2 - (2j-d)^2. Open: z_0..z_{d-1} with r_j = 2d^2 - (2j-d+1)^2.
RadiusProfile default_radii(int d, Sector sector);
// Inequalities a profile must satisfy for the sector's structural integrands.
bool admissible_radii(const RadiusProfile &p, Sector sector);
// Multiply each radius by an independent random factor in [1 - 1/40, 1 + 1/40], keeping admissibility.
RadiusProfile perturb_radii(const RadiusProfile &p, Sector sector, std::mt19937_64 &rng);

// A pole of f in one variable: var = root (a linear form in the other variables, root[var] = 0).
struct Pole {
    std::vector<BigRational> root;
    int order = 0;
};

// Poles of f in var enclosed by |var| = r_var; throws IndecisivePole when the bounds straddle r_var.
std::vector<Pole> plan_poles(const FactoredRational &f, std::size_t var, const RadiusProfile &profile);

// Residue of f d(var) at var = root; zero if f has no pole there.
FactoredRational residue_at(const FactoredRational &f, std::size_t var, const std::vector<BigRational> &root);

// Sum of residues at the poles enclosed by the contour of var.
FactoredRational residue_stage(const FactoredRational &f, std::size_t var, const RadiusProfile &profile);

// Ascending order when `order` is empty.
BigRational iterated_residue(const FactoredRational &f, const RadiusProfile &profile,
                             std::vector<std::size_t> order = {});

// iterated_residue, retrying with perturbed radii on IndecisivePole.
BigRational iterated_residue_retrying(const FactoredRational &f, const RadiusProfile &profile, Sector sector,
                                      int retry_limit, std::vector<std::size_t> order = {});

} // namespace vsc

#endif
