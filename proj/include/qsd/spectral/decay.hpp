#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qsd/spectral/killed_generator.hpp"

namespace qsd {

struct ClassDecay {
  std::vector<std::size_t> states;
  double lambda = 0.0;
  bool leaks = true;  // some mass leaves the class (killing or transitions)
};

struct SpectralResult {
  double lambda = 0.0;
  Eigen::VectorXd left;   // quasi-stationary direction, nonnegative, sums to 1
  Eigen::VectorXd right;  // L g = -lambda g, nonnegative, max entry 1
  double left_residual = 0.0;   // ||mu L + lambda mu||_1 / ||mu||_1
  double right_residual = 0.0;  // ||L g + lambda g||_inf / ||g||_inf
  bool defective = false;  // two classes on one path share the minimal rate
  bool absorbing = false;  // a class never leaks; lambda = 0
  std::vector<ClassDecay> classes;
  std::optional<double> lambda_fit;  // from exact log-survival when defective
  int iterations = 0;

  bool has_vectors() const noexcept { return left.size() > 0; }
};

struct DecayOptions {
  double tolerance = 1e-13;  // relative residual target of the iteration
  int max_iterations = 5000;
  double class_tie = 1e-9;   // relative gap below which two class rates tie
};

/// Smallest decay rate of the killed generator by inverse iteration on -L
/// (sparse LU). Strongly connected classes are analysed first; a class that
/// never leaks makes the result absorbing with lambda = 0 and no vectors.
/// When the minimal class rate is shared along a path the generator is
/// defective and the rate is also fitted from exact survival.
SpectralResult principal_decay(const KilledGenerator& gen, const DecayOptions& opt = {});

struct AsymptoticFit {
  double lambda = 0.0;
  double power = 0.0;  // m in t^m
  double max_residual = 0.0;
};

/// Least squares of log S = c - lambda t + m log t + sum_j a_j t^-j.
AsymptoticFit fit_log_survival(const std::vector<double>& t, const std::vector<double>& log_s,
                               int inverse_terms = 4);

/// Exact log-survival from `initial` on [t_lo, t_hi] fitted as above.
AsymptoticFit fit_exact_decay(const KilledGenerator& gen, const Eigen::VectorXd& initial,
                              double t_lo, double t_hi, int points = 64);

/// Tarjan's strongly connected components of the positive off-diagonal
/// pattern, returned in reverse topological order.
std::vector<std::vector<std::size_t>> strongly_connected_classes(const SparseMatrix& l);

}  // namespace qsd
