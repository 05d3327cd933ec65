#include "qsd/measures/observables.hpp"

#include <algorithm>

namespace qsd {

Observable site_occupancy(Site s) {
  return [s](const Configuration& c) { return static_cast<double>(c[s]); };
}

Observable window_sum(std::vector<Site> sites) {
  return [sites = std::move(sites)](const Configuration& c) {
    long sum = 0;
    for (Site s : sites) sum += c[s];
    return static_cast<double>(sum);
  };
}

Observable threshold_indicator(std::vector<Site> sites, long level) {
  return [sites = std::move(sites), level](const Configuration& c) {
    long sum = 0;
    for (Site s : sites) sum += c[s];
    return sum >= level ? 1.0 : 0.0;
  };
}

std::vector<Site> dilate(const Lattice& lattice, const std::vector<Site>& region, int radius) {
  std::vector<Site> out;
  for (Site s = 0; s < lattice.num_sites(); ++s) {
    for (Site r : region) {
      if (lattice.distance(s, r) <= radius) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

std::vector<NamedObservable> increasing_suite(const Model& m, const SuiteOptions& opt) {
  std::vector<NamedObservable> suite;
  const auto& region = m.target().region();
  if (opt.site_occupancies) {
    for (Site s : dilate(m.lattice(), region, opt.dilation))
      suite.push_back({"eta(" + std::to_string(s) + ")", site_occupancy(s)});
  }
  std::size_t last = 0;
  for (int r = 0; r <= opt.dilation; ++r) {
    auto w = dilate(m.lattice(), region, r);
    if (r > 0 && w.size() == last) break;  // dilation has filled the lattice
    last = w.size();
    suite.push_back({"window_sum(r=" + std::to_string(r) + ")", window_sum(std::move(w))});
  }
  const long top = opt.max_threshold >= 0 ? opt.max_threshold : m.target().threshold() + 1;
  for (long j = 1; j <= top; ++j)
    suite.push_back({"load>=" + std::to_string(j), threshold_indicator(region, j)});
  return suite;
}

}  // namespace qsd
