#include "qsd/model/rates.hpp"

#include <algorithm>
#include <cmath>

#include "qsd/core/error.hpp"

namespace qsd {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

OccupancyFunction OccupancyFunction::linear() { return {Kind::linear, 0, {}}; }
OccupancyFunction OccupancyFunction::constant() { return {Kind::constant, 0, {}}; }

OccupancyFunction OccupancyFunction::capped_linear(int c) {
  if (c < 1) throw ValidationError("capped_linear needs cap >= 1");
  return {Kind::capped_linear, c, {}};
}

OccupancyFunction OccupancyFunction::table(std::vector<double> values) {
  if (values.size() < 2) throw ValidationError("g table needs at least g(0) and g(1)");
  return {Kind::table, 0, std::move(values)};
}

OccupancyFunction OccupancyFunction::exclusion() { return {Kind::exclusion, 1, {}}; }

OccupancyFunction OccupancyFunction::partial_exclusion(int c) {
  if (c < 1) throw ValidationError("partial exclusion needs capacity >= 1");
  return {Kind::partial_exclusion, c, {}};
}

double OccupancyFunction::operator()(int k) const noexcept {
  if (k <= 0) return kind_ == Kind::table ? values_[0] : 0.0;
  switch (kind_) {
    case Kind::linear:
      return k;
    case Kind::constant:
      return 1.0;
    case Kind::capped_linear:
      return std::min(k, param_);
    case Kind::table:
      return static_cast<std::size_t>(k) < values_.size() ? values_[k] : values_.back();
    case Kind::exclusion:
      return k == 1 ? 1.0 : kInf;
    case Kind::partial_exclusion:
      return k <= param_ ? static_cast<double>(k) * param_ / (param_ - k + 1) : kInf;
  }
  return 0.0;
}

double OccupancyFunction::supremum() const noexcept {
  switch (kind_) {
    case Kind::constant:
      return 1.0;
    case Kind::capped_linear:
      return param_;
    case Kind::table:
      return *std::max_element(values_.begin(), values_.end());
    default:
      return kInf;
  }
}

std::optional<int> OccupancyFunction::max_occupancy() const noexcept {
  if (kind_ == Kind::exclusion) return 1;
  if (kind_ == Kind::partial_exclusion) return param_;
  return std::nullopt;
}

std::string OccupancyFunction::name() const {
  switch (kind_) {
    case Kind::linear:
      return "linear";
    case Kind::constant:
      return "constant";
    case Kind::capped_linear:
      return "capped_linear(" + std::to_string(param_) + ")";
    case Kind::table:
      return "table";
    case Kind::exclusion:
      return "exclusion";
    case Kind::partial_exclusion:
      return "partial_exclusion(" + std::to_string(param_) + ")";
  }
  return "?";
}

std::string to_string(RateFamily f) {
  switch (f) {
    case RateFamily::zero_range:
      return "zero_range";
    case RateFamily::exclusion:
      return "exclusion";
    case RateFamily::misanthrope:
      return "misanthrope";
  }
  return "?";
}

RateFunction RateFunction::zero_range(OccupancyFunction g) {
  return {RateFamily::zero_range, Formula::from_g, g, g, 0};
}

RateFunction RateFunction::exclusion() {
  return {RateFamily::exclusion, Formula::exclusion, OccupancyFunction::exclusion(),
          OccupancyFunction::exclusion(), 1};
}

RateFunction RateFunction::misanthrope_ratio(OccupancyFunction g0) {
  const double g1 = g0(1);
  if (!(g1 > 0)) throw ValidationError("ratio misanthrope needs g0(1) > 0");
  // Tabulate n g0(n) / g0(1) far enough for any simulated occupancy; the
  // table extends by its last value, which the validator will flag if the
  // extension breaks monotonicity.
  std::vector<double> values(257);
  for (int n = 0; n <= 256; ++n) values[n] = n * g0(n) / g1;
  return {RateFamily::misanthrope, Formula::ratio, OccupancyFunction::table(std::move(values)),
          std::move(g0), 0};
}

RateFunction RateFunction::misanthrope_partial_exclusion(int c) {
  return {RateFamily::misanthrope, Formula::partial_exclusion,
          OccupancyFunction::partial_exclusion(c), OccupancyFunction::partial_exclusion(c), c};
}

double RateFunction::b(int n, int m) const noexcept {
  if (n <= 0) return 0.0;
  switch (formula_) {
    case Formula::from_g:
      return g_(n);
    case Formula::exclusion:
      return m == 0 ? 1.0 : 0.0;
    case Formula::ratio:
      return g0_(n) / (m + 1);
    case Formula::partial_exclusion:
      return static_cast<double>(n) * std::max(capacity_ - m, 0);
  }
  return 0.0;
}

std::optional<int> RateFunction::max_occupancy() const noexcept {
  if (formula_ == Formula::exclusion) return 1;
  if (formula_ == Formula::partial_exclusion) return capacity_;
  return std::nullopt;
}

double RateFunction::lipschitz_bound(int cap) const noexcept {
  double delta = 0.0;
  for (int n = 0; n < cap; ++n) delta = std::max(delta, b(n + 1, 0) - b(n, 0));
  return delta;
}

std::string RateFunction::name() const {
  switch (formula_) {
    case Formula::from_g:
      return "zero_range[g=" + g_.name() + "]";
    case Formula::exclusion:
      return "exclusion";
    case Formula::ratio:
      return "misanthrope[ratio g0=" + g0_.name() + "]";
    case Formula::partial_exclusion:
      return "misanthrope[partial_exclusion c=" + std::to_string(capacity_) + "]";
  }
  return "?";
}

}  // namespace qsd
