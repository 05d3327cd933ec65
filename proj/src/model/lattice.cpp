#include "qsd/model/lattice.hpp"

#include <cstdlib>

#include "qsd/core/error.hpp"

namespace qsd {

std::string to_string(Boundary b) {
  return b == Boundary::torus ? "torus" : "blocked";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "torus") return Boundary::torus;
  if (s == "blocked") return Boundary::blocked;
  throw ValidationError("unknown boundary mode '" + s + "' (expected torus or blocked)");
}

Lattice::Lattice(std::vector<int> extents, Boundary boundary)
    : extents_(std::move(extents)), boundary_(boundary), num_sites_(1) {
  if (extents_.empty()) throw ValidationError("lattice dimension must be positive");
  strides_.assign(extents_.size(), 1);
  for (std::size_t a = extents_.size(); a-- > 0;) {
    if (extents_[a] <= 0) throw ValidationError("lattice extents must be positive");
    strides_[a] = num_sites_;
    num_sites_ *= static_cast<std::size_t>(extents_[a]);
  }
}

Coords Lattice::coords(Site s) const {
  Coords c(extents_.size());
  for (std::size_t a = 0; a < extents_.size(); ++a) {
    c[a] = static_cast<int>(s / strides_[a]);
    s %= strides_[a];
  }
  return c;
}

std::optional<Site> Lattice::site(std::span<const int> coords) const {
  if (coords.size() != extents_.size()) {
    throw ValidationError("coordinate dimension does not match lattice");
  }
  Site s = 0;
  for (std::size_t a = 0; a < extents_.size(); ++a) {
    int x = coords[a];
    if (boundary_ == Boundary::torus) {
      x %= extents_[a];
      if (x < 0) x += extents_[a];
    } else if (x < 0 || x >= extents_[a]) {
      return std::nullopt;
    }
    s += static_cast<std::size_t>(x) * strides_[a];
  }
  return s;
}

std::optional<Site> Lattice::shift(Site from, std::span<const int> offset) const {
  Coords c = coords(from);
  for (std::size_t a = 0; a < c.size(); ++a) c[a] += offset[a];
  return site(c);
}

int Lattice::distance(Site a, Site b) const {
  const Coords ca = coords(a);
  const Coords cb = coords(b);
  int d = 0;
  for (std::size_t k = 0; k < ca.size(); ++k) {
    int diff = std::abs(ca[k] - cb[k]);
    if (boundary_ == Boundary::torus) diff = std::min(diff, extents_[k] - diff);
    d += diff;
  }
  return d;
}

}  // namespace qsd
