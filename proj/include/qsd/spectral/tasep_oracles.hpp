#pragma once

#include <cstdint>
#include <vector>

#include "qsd/model/configuration.hpp"

namespace qsd {

/// Line, origin empty initially, product Bernoulli(rho): (1 - rho) e^{-rho t}.
double tasep_line_survival(double rho, double t);
inline double tasep_line_lambda(double rho) { return rho; }
/// Yaglom limit: Bernoulli(rho) left of the origin, empty from it on.
/// `offset` is the signed position relative to the origin.
double tasep_line_yaglom(double rho, long offset);

/// P(N_t < chi) for a rate-one Poisson process; 0 when chi = 0.
double poisson_below(long chi, double t);

/// Distance from site 0 to the nearest particle on its left (0 when site 0
/// is occupied) on a ring of size c.size(). Returns -1 for an empty ring.
long circle_chi(const Configuration& c);
/// Same with jumps reversed: nearest particle on the right.
long circle_chi_reversed(const Configuration& c);

double tasep_circle_survival(const Configuration& c, double t);
/// Average over the uniform measure on n-particle configurations of the
/// ring of size N, with configurations that occupy the origin counted as
/// already hit.
double tasep_circle_mixture(int num_sites, int particles, double t);
inline double tasep_circle_lambda() { return 1.0; }

/// Limit of P*_eta(tau > t) / P*_{nu_N}(tau > t) for the reversed dynamics:
/// C(N, n) on the configuration packed at -1..-n, 0 elsewhere.
double tasep_circle_yaglom_ratio(const Configuration& c);
/// The same ratio at finite t from the closed forms.
double tasep_circle_reversed_ratio(const Configuration& c, double t);

double binomial(int n, int k);

}  // namespace qsd
