#include "qsd/model/configuration.hpp"

#include <stdexcept>
#include <string>

namespace qsd {

Configuration::Configuration(std::vector<int> occupancy) : occ_(std::move(occupancy)) {
  for (int x : occ_) {
    if (x < 0) throw std::invalid_argument("negative occupancy");
    total_ += x;
  }
}

void Configuration::move(Site from, Site to) {
  if (occ_[from] < 1) {
    throw std::logic_error("jump from empty site " + std::to_string(from));
  }
  --occ_[from];
  ++occ_[to];
}

void Configuration::add(Site s, int delta) {
  if (occ_[s] + delta < 0) throw std::logic_error("occupancy would become negative");
  occ_[s] += delta;
  total_ += delta;
}

Configuration Configuration::with_particle(Site s) const {
  Configuration c = *this;
  c.add(s, 1);
  return c;
}

bool Configuration::dominated_by(const Configuration& other) const noexcept {
  if (other.occ_.size() != occ_.size()) return false;
  for (std::size_t i = 0; i < occ_.size(); ++i) {
    if (occ_[i] > other.occ_[i]) return false;
  }
  return true;
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (int x : c.occupancy()) {
    h ^= static_cast<std::uint64_t>(x) + 0x9E3779B97F4A7C15ULL;
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

}  // namespace qsd
