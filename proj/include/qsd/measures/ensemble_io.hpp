#pragma once

#include <filesystem>

#include "qsd/measures/ensemble.hpp"

namespace qsd {

inline constexpr int kEnsembleFormatVersion = 1;

/// One JSON header line, then little-endian float64 weights, uint32 cluster
/// ids (when present) and uint32 occupancies in atom-major order. See
/// docs/formats.md.
void write_ensemble(const WeightedEnsemble& e, const std::filesystem::path& path);
WeightedEnsemble read_ensemble(const std::filesystem::path& path);

}  // namespace qsd
