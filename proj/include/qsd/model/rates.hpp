#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace qsd {

/// Occupancy function g: N -> [0, inf], tabulated by formula tag so that it
/// can be evaluated without indirection and serialized by name.
class OccupancyFunction {
 public:
  enum class Kind { linear, constant, capped_linear, table, exclusion, partial_exclusion };

  /// g(k) = k (independent walkers, Poisson marginals).
  static OccupancyFunction linear();
  /// g(k) = 1 for k >= 1 (geometric marginals).
  static OccupancyFunction constant();
  /// g(k) = min(k, c).
  static OccupancyFunction capped_linear(int c);
  /// g(k) = values[k], extended by the last value.
  static OccupancyFunction table(std::vector<double> values);
  /// g(0) = 0, g(1) = 1, g(k >= 2) = inf (Bernoulli marginals).
  static OccupancyFunction exclusion();
  /// g(k) = k c / (c - k + 1) for k <= c, inf beyond (binomial marginals).
  static OccupancyFunction partial_exclusion(int c);

  double operator()(int k) const noexcept;

  Kind kind() const noexcept { return kind_; }
  int parameter() const noexcept { return param_; }
  const std::vector<double>& values() const noexcept { return values_; }
  /// sup_k g(k); +inf when unbounded.
  double supremum() const noexcept;
  /// Largest occupancy with positive stationary weight, if bounded.
  std::optional<int> max_occupancy() const noexcept;
  std::string name() const;

 private:
  OccupancyFunction(Kind kind, int param, std::vector<double> values)
      : kind_(kind), param_(param), values_(std::move(values)) {}

  Kind kind_;
  int param_ = 0;
  std::vector<double> values_;
};

enum class RateFamily { zero_range, exclusion, misanthrope };

std::string to_string(RateFamily f);

/// Jump-rate function b(n, m) of the misanthrope process together with the
/// occupancy function g whose product measures it leaves invariant.
class RateFunction {
 public:
  enum class Formula { from_g, exclusion, ratio, partial_exclusion };

  /// b(n, m) = g(n).
  static RateFunction zero_range(OccupancyFunction g);
  /// b(n, m) = 1{n >= 1, m = 0} on {0,1}-valued configurations.
  static RateFunction exclusion();
  /// b(n, m) = g0(n) / (m + 1); invariant-measure g(n) = n g0(n) / g0(1).
  static RateFunction misanthrope_ratio(OccupancyFunction g0);
  /// b(n, m) = n max(c - m, 0): the capacity-c partial exclusion process.
  static RateFunction misanthrope_partial_exclusion(int c);

  RateFamily family() const noexcept { return family_; }
  Formula formula() const noexcept { return formula_; }

  double b(int n, int m) const noexcept;
  double g(int k) const noexcept { return g_(k); }
  const OccupancyFunction& occupancy() const noexcept { return g_; }
  /// For the ratio formula, the g0 in the numerator.
  const OccupancyFunction& numerator() const noexcept { return g0_; }

  /// Whether b(n, m) depends on m (false for zero range).
  bool depends_on_target() const noexcept { return family_ != RateFamily::zero_range; }
  /// Hard bound on site occupancy imposed by the dynamics, if any.
  std::optional<int> max_occupancy() const noexcept;
  /// sup_{n < cap} b(n + 1, 0) - b(n, 0).
  double lipschitz_bound(int cap) const noexcept;
  /// Extra rate of an added particle: b(n + 1, m) - b(n, m).
  double increment(int n, int m) const noexcept { return b(n + 1, m) - b(n, m); }
  std::string name() const;

 private:
  RateFunction(RateFamily fam, Formula form, OccupancyFunction g, OccupancyFunction g0, int c)
      : family_(fam), formula_(form), g_(std::move(g)), g0_(std::move(g0)), capacity_(c) {}

  RateFamily family_;
  Formula formula_;
  OccupancyFunction g_;
  OccupancyFunction g0_;
  int capacity_ = 0;
};

}  // namespace qsd
