#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qsd {

using Site = std::size_t;
using Coords = std::vector<int>;

enum class Boundary { torus, blocked };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Finite box of Z^d, either wrapped (torus) or closed (blocked). Sites are
/// numbered in row-major order with the first axis varying slowest.
class Lattice {
 public:
  Lattice(std::vector<int> extents, Boundary boundary);

  std::size_t dimension() const noexcept { return extents_.size(); }
  std::size_t num_sites() const noexcept { return num_sites_; }
  const std::vector<int>& extents() const noexcept { return extents_; }
  Boundary boundary() const noexcept { return boundary_; }

  Coords coords(Site s) const;
  /// Site at the given coordinates. Coordinates outside the box are wrapped
  /// on a torus and rejected (std::nullopt) on a blocked box.
  std::optional<Site> site(std::span<const int> coords) const;
  /// Destination of displacement `offset` from `from`, or nullopt when the
  /// move leaves a blocked box.
  std::optional<Site> shift(Site from, std::span<const int> offset) const;
  /// L1 distance on the lattice graph (wrap-aware on a torus).
  int distance(Site a, Site b) const;

  bool operator==(const Lattice&) const = default;

 private:
  std::vector<int> extents_;
  std::vector<std::size_t> strides_;
  Boundary boundary_;
  std::size_t num_sites_;
};

}  // namespace qsd
