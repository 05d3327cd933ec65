#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qsd/spectral/killed_generator.hpp"

namespace qsd {

inline constexpr double kUniformizationTail = 1e-14;

/// u exp(tL) for a row vector u, by uniformization: with q the largest exit
/// rate and P = I + L / q, the Poisson(qt) mixture of u P^k truncated once
/// the remaining Poisson mass is below `tail`.
Eigen::VectorXd evolve_row(const SparseMatrix& l, const Eigen::VectorXd& u, double t,
                           double tail = kUniformizationTail);

/// initial^T exp(t L) 1.
double exact_survival(const KilledGenerator& gen, const Eigen::VectorXd& initial, double t);
std::vector<double> exact_survival(const KilledGenerator& gen, const Eigen::VectorXd& initial,
                                   const std::vector<double>& t_grid);

/// log P(tau > t) on an increasing grid, evolving in steps of at most
/// `step` and renormalizing after each, so values far below the double
/// range of P itself stay accurate.
std::vector<double> log_survival(const KilledGenerator& gen, const Eigen::VectorXd& initial,
                                 const std::vector<double>& t_grid, double step = 1.0);

}  // namespace qsd
