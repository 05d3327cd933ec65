#pragma once

#include <string>
#include <vector>

#include "qsd/measures/ensemble.hpp"
#include "qsd/model/model.hpp"

namespace qsd {

struct NamedObservable {
  std::string name;
  Observable f;
};

Observable site_occupancy(Site s);
Observable window_sum(std::vector<Site> sites);
/// 1{sum over sites >= level}.
Observable threshold_indicator(std::vector<Site> sites, long level);

/// Sites within lattice distance `radius` of the region.
std::vector<Site> dilate(const Lattice& lattice, const std::vector<Site>& region, int radius);

struct SuiteOptions {
  int dilation = 1;              // largest dilation radius used
  bool site_occupancies = true;  // include eta(s) for s in the dilated region
  long max_threshold = -1;       // up to k + 1 when negative
};

/// The fixed suite of increasing functions used for domination tests:
/// single-site occupancies in and near the target region, window sums over
/// the region and its dilations, and threshold indicators on the region.
std::vector<NamedObservable> increasing_suite(const Model& m, const SuiteOptions& opt = {});

}  // namespace qsd
