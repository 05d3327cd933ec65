#include "qsd/measures/ensemble_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "qsd/core/error.hpp"

namespace qsd {
namespace {

static_assert(std::endian::native == std::endian::little, "ensemble files assume a little-endian host");

template <class T>
void put(std::ofstream& out, const std::vector<T>& v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
std::vector<T> get(std::ifstream& in, std::size_t n) {
  std::vector<T> v(n);
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T)));
  if (!in) throw IoError("ensemble file truncated");
  return v;
}

}  // namespace

void write_ensemble(const WeightedEnsemble& e, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  nlohmann::json h = {{"format", "qsd-ensemble"},
                      {"version", kEnsembleFormatVersion},
                      {"num_atoms", e.size()},
                      {"num_sites", e.num_sites()},
                      {"exact", e.is_exact()},
                      {"has_clusters", !e.clusters().empty()},
                      {"censoring_fraction", e.censoring_fraction()}};
  out << h.dump() << '\n';
  put(out, e.weights());
  if (!e.clusters().empty()) put(out, e.clusters());
  std::vector<std::uint32_t> occ;
  occ.reserve(e.size() * e.num_sites());
  for (const auto& a : e.atoms())
    for (int x : a.occupancy()) occ.push_back(static_cast<std::uint32_t>(x));
  put(out, occ);
  if (!out) throw IoError("failed writing " + path.string());
}

WeightedEnsemble read_ensemble(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& ex) {
    throw IoError("bad ensemble header: " + std::string(ex.what()));
  }
  if (h.value("format", "") != "qsd-ensemble" || h.value("version", 0) != kEnsembleFormatVersion)
    throw IoError("unsupported ensemble format in " + path.string());
  const auto n = h.at("num_atoms").get<std::size_t>();
  const auto sites = h.at("num_sites").get<std::size_t>();
  auto weights = get<double>(in, n);
  std::vector<std::uint32_t> clusters;
  if (h.at("has_clusters").get<bool>()) clusters = get<std::uint32_t>(in, n);
  auto occ = get<std::uint32_t>(in, n * sites);
  std::vector<Configuration> atoms;
  atoms.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    atoms.emplace_back(std::vector<int>(occ.begin() + static_cast<std::ptrdiff_t>(i * sites),
                                        occ.begin() + static_cast<std::ptrdiff_t>((i + 1) * sites)));
  WeightedEnsemble e = h.at("exact").get<bool>()
                           ? WeightedEnsemble::exact(std::move(atoms), std::move(weights))
                           : WeightedEnsemble(std::move(atoms), std::move(weights), std::move(clusters));
  e.set_censoring_fraction(h.value("censoring_fraction", 0.0));
  return e;
}

}  // namespace qsd
