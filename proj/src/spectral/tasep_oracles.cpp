#include "qsd/spectral/tasep_oracles.hpp"

#include <cmath>

#include "qsd/core/error.hpp"

namespace qsd {

double tasep_line_survival(double rho, double t) {
  if (!(rho > 0 && rho < 1)) throw DomainError("density must lie in (0, 1)");
  if (t < 0) throw ValidationError("time must be nonnegative");
  return (1.0 - rho) * std::exp(-rho * t);
}

double tasep_line_yaglom(double rho, long offset) { return offset < 0 ? rho : 0.0; }

double poisson_below(long chi, double t) {
  if (chi <= 0) return 0.0;
  if (t == 0) return 1.0;
  // Sum e^{-t} t^k / k! for k < chi, terms built in log space.
  double s = 0.0;
  for (long k = 0; k < chi; ++k)
    s += std::exp(-t + static_cast<double>(k) * std::log(t) - std::lgamma(static_cast<double>(k) + 1.0));
  return std::min(s, 1.0);
}

long circle_chi(const Configuration& c) {
  const auto n = static_cast<long>(c.size());
  for (long d = 0; d < n; ++d)
    if (c[static_cast<Site>((n - d) % n)] > 0) return d;
  return -1;
}

long circle_chi_reversed(const Configuration& c) {
  const auto n = static_cast<long>(c.size());
  for (long d = 0; d < n; ++d)
    if (c[static_cast<Site>(d % n)] > 0) return d;
  return -1;
}

double tasep_circle_survival(const Configuration& c, double t) {
  const long chi = circle_chi(c);
  return chi < 0 ? 1.0 : poisson_below(chi, t);
}

double binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

double tasep_circle_mixture(int num_sites, int particles, double t) {
  if (particles < 1 || particles > num_sites) throw ValidationError("need 1 <= particles <= sites");
  // C(N - c - 1, n - 1) configurations have chi = c >= 1.
  double s = 0.0;
  for (int c = 1; c <= num_sites - particles; ++c)
    s += binomial(num_sites - c - 1, particles - 1) * poisson_below(c, t);
  return s / binomial(num_sites, particles);
}

double tasep_circle_yaglom_ratio(const Configuration& c) {
  const auto n = static_cast<int>(c.size());
  const auto k = static_cast<int>(c.total());
  for (int i = 1; i <= k; ++i)
    if (c[static_cast<Site>(n - i)] == 0) return 0.0;
  return binomial(n, k);
}

double tasep_circle_reversed_ratio(const Configuration& c, double t) {
  const auto n = static_cast<int>(c.size());
  const auto k = static_cast<int>(c.total());
  // Reflection maps the reversed dynamics onto the forward one.
  const double num = poisson_below(circle_chi_reversed(c), t);
  return num / tasep_circle_mixture(n, k, t);
}

}  // namespace qsd
