#include "qsd/model/validation.hpp"

#include <cmath>
#include <sstream>

namespace qsd {
namespace {

std::string pair_witness(const char* what, int n, int m, double lhs, double rhs) {
  std::ostringstream os;
  os << what << " (n=" << n << ", m=" << m << "): " << lhs << " vs " << rhs;
  return os.str();
}

void add(ValidationReport& r, std::string name, bool passed, std::string witness = {}) {
  r.checks.push_back({std::move(name), passed, passed ? std::string{} : std::move(witness)});
}

}  // namespace

bool ValidationReport::ok() const noexcept {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const HypothesisCheck* ValidationReport::find(const std::string& name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name + ": " + c.witness);
  }
  return out;
}

ValidationReport validate_model(const Lattice& lattice, const JumpKernel& kernel,
                                const RateFunction& rates, int occupancy_cap) {
  ValidationReport r;
  const double tol = kHypothesisTolerance;

  // Kernel.
  add(r, "kernel.dimension", kernel.dimension() == lattice.dimension(),
      "kernel dimension " + std::to_string(kernel.dimension()) + " vs lattice " +
          std::to_string(lattice.dimension()));
  {
    bool nonneg = true;
    std::string w;
    for (std::size_t k = 0; k < kernel.size(); ++k) {
      if (kernel.weights()[k] < 0) {
        nonneg = false;
        w = "weight[" + std::to_string(k) + "] = " + std::to_string(kernel.weights()[k]);
        break;
      }
    }
    add(r, "kernel.nonnegative", nonneg, w);
  }
  const double total = kernel.total_weight();
  add(r, "kernel.normalized", std::abs(total - 1.0) <= tol,
      "weights sum to " + std::to_string(total));
  r.range = kernel.range();
  add(r, "kernel.finite_range", r.range > 0, "no offset with positive weight");
  if (kernel.dimension() == lattice.dimension()) {
    // Irreducibility is a property of the offsets' group, so it is checked on
    // the torus of the same extents even when the lattice is blocked.
    const Lattice torus(lattice.extents(), Boundary::torus);
    add(r, "kernel.irreducible", kernel.symmetrized_irreducible_on(torus),
        "symmetrized kernel does not reach every site");
  }
  r.drift = kernel.drift();
  bool zero_drift = true;
  for (double v : r.drift) zero_drift = zero_drift && std::abs(v) <= tol;
  add(r, "kernel.drift", true);
  if (zero_drift) r.warnings.push_back("kernel has zero drift");

  // Rates, on 0..cap.
  int cap = occupancy_cap;
  if (auto m = rates.max_occupancy()) cap = std::min(cap, *m);
  r.occupancy_cap = cap;

  auto first_failure = [&](auto&& pred) -> std::string {
    for (int n = 0; n <= cap; ++n) {
      for (int m = 0; m <= cap; ++m) {
        if (auto w = pred(n, m); !w.empty()) return w;
      }
    }
    return {};
  };

  std::string w = first_failure([&](int n, int m) -> std::string {
    return n == 0 && rates.b(0, m) != 0.0 ? pair_witness("b(0,m) != 0", n, m, rates.b(0, m), 0)
                                          : std::string{};
  });
  add(r, "rates.b0_zero", w.empty(), w);

  w = first_failure([&](int n, int m) -> std::string {
    if (n == cap) return {};
    const double a = rates.b(n, m), b = rates.b(n + 1, m);
    return b < a - tol ? pair_witness("b(n+1,m) < b(n,m)", n, m, b, a) : std::string{};
  });
  add(r, "rates.monotone_first", w.empty(), w);

  w = first_failure([&](int n, int m) -> std::string {
    if (m == cap) return {};
    const double a = rates.b(n, m), b = rates.b(n, m + 1);
    return b > a + tol ? pair_witness("b(n,m+1) > b(n,m)", n, m, b, a) : std::string{};
  });
  add(r, "rates.monotone_second", w.empty(), w);

  w = first_failure([&](int n, int m) -> std::string {
    if (n < 1 || m < 1) return {};
    const double lhs = rates.b(n, m) - rates.b(m, n);
    const double rhs = rates.b(n, 0) - rates.b(m, 0);
    return std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(rhs))
               ? pair_witness("b(n,m)-b(m,n) != b(n,0)-b(m,0)", n, m, lhs, rhs)
               : std::string{};
  });
  add(r, "rates.antisymmetry", w.empty(), w);

  r.delta = rates.lipschitz_bound(cap);
  add(r, "rates.lipschitz", std::isfinite(r.delta), "Delta is not finite");

  const auto& g = rates.occupancy();
  add(r, "rates.g_zero", g(0) == 0.0, "g(0) = " + std::to_string(g(0)));
  add(r, "rates.g_one", std::abs(g(1) - 1.0) <= tol, "g(1) = " + std::to_string(g(1)));
  {
    std::string gw;
    for (int k = 0; k < cap && gw.empty(); ++k) {
      if (g(k + 1) < g(k) - tol) {
        gw = "g(" + std::to_string(k + 1) + ") < g(" + std::to_string(k) + ")";
      }
    }
    add(r, "rates.g_monotone", gw.empty(), gw);
  }

  w = first_failure([&](int n, int m) -> std::string {
    if (n < 1 || m < 1) return {};
    if (!std::isfinite(g(n)) || !std::isfinite(g(m))) return {};
    const double lhs = rates.b(n, m - 1) * g(m);
    const double rhs = rates.b(m, n - 1) * g(n);
    return std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(rhs))
               ? pair_witness("b(n,m-1)g(m) != b(m,n-1)g(n)", n, m, lhs, rhs)
               : std::string{};
  });
  add(r, "rates.compatibility", w.empty(), w);
  return r;
}

}  // namespace qsd
