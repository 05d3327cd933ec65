#include "qsd/model/model_io.hpp"

#include "qsd/core/error.hpp"

namespace qsd {

using nlohmann::json;

OccupancyFunction occupancy_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") return OccupancyFunction::linear();
  if (kind == "constant") return OccupancyFunction::constant();
  if (kind == "capped_linear") return OccupancyFunction::capped_linear(j.at("cap").get<int>());
  if (kind == "table") return OccupancyFunction::table(j.at("values").get<std::vector<double>>());
  throw ValidationError("unknown g kind '" + kind + "'");
}

json occupancy_to_json(const OccupancyFunction& g) {
  switch (g.kind()) {
    case OccupancyFunction::Kind::linear:
      return {{"kind", "linear"}};
    case OccupancyFunction::Kind::constant:
      return {{"kind", "constant"}};
    case OccupancyFunction::Kind::capped_linear:
      return {{"kind", "capped_linear"}, {"cap", g.parameter()}};
    case OccupancyFunction::Kind::table:
      return {{"kind", "table"}, {"values", g.values()}};
    case OccupancyFunction::Kind::exclusion:
      return {{"kind", "exclusion"}};
    case OccupancyFunction::Kind::partial_exclusion:
      return {{"kind", "partial_exclusion"}, {"capacity", g.parameter()}};
  }
  return {};
}

namespace {

JumpKernel kernel_from_json(const json& j, std::size_t dim) {
  if (j.contains("preset")) {
    const std::string p = j.at("preset").get<std::string>();
    if (p == "tasep") return JumpKernel::totally_asymmetric();
    if (p == "nearest_neighbour") {
      return JumpKernel::nearest_neighbour(dim, j.at("p_right").get<double>());
    }
    throw ValidationError("unknown kernel preset '" + p + "'");
  }
  return JumpKernel(j.at("offsets").get<std::vector<Coords>>(),
                    j.at("weights").get<std::vector<double>>());
}

RateFunction rates_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "zero_range") return RateFunction::zero_range(occupancy_from_json(j.at("g")));
  if (family == "exclusion") return RateFunction::exclusion();
  if (family == "misanthrope") {
    const std::string formula = j.at("formula").get<std::string>();
    if (formula == "ratio") return RateFunction::misanthrope_ratio(occupancy_from_json(j.at("g0")));
    if (formula == "partial_exclusion") {
      return RateFunction::misanthrope_partial_exclusion(j.at("capacity").get<int>());
    }
    throw ValidationError("unknown misanthrope formula '" + formula + "'");
  }
  throw ValidationError("unknown rate family '" + family + "'");
}

json rates_to_json(const RateFunction& r) {
  switch (r.formula()) {
    case RateFunction::Formula::from_g:
      return {{"family", "zero_range"}, {"g", occupancy_to_json(r.occupancy())}};
    case RateFunction::Formula::exclusion:
      return {{"family", "exclusion"}};
    case RateFunction::Formula::ratio:
      return {{"family", "misanthrope"}, {"formula", "ratio"}, {"g0", occupancy_to_json(r.numerator())}};
    case RateFunction::Formula::partial_exclusion:
      return {{"family", "misanthrope"},
              {"formula", "partial_exclusion"},
              {"capacity", r.occupancy().parameter()}};
  }
  return {};
}

}  // namespace

Model model_from_json(const json& j) {
  try {
    const json& jl = j.at("lattice");
    Lattice lattice(jl.at("extents").get<std::vector<int>>(),
                    boundary_from_string(jl.value("boundary", std::string("torus"))));
    JumpKernel kernel = kernel_from_json(j.at("kernel"), lattice.dimension());
    RateFunction rates = rates_from_json(j.at("rates"));
    const json& jt = j.at("target");
    std::vector<Site> region;
    for (const auto& c : jt.at("sites")) {
      const auto coords = c.get<Coords>();
      auto s = lattice.site(coords);
      if (!s) throw ValidationError("target site outside the lattice");
      region.push_back(*s);
    }
    TargetSet target(std::move(region), jt.at("threshold").get<long>());
    return Model(std::move(lattice), std::move(kernel), std::move(rates), std::move(target),
                 j.value("occupancy_cap", kDefaultOccupancyCap));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model description: ") + e.what());
  }
}

json model_to_json(const Model& m) {
  json sites = json::array();
  for (Site s : m.target().region()) sites.push_back(m.lattice().coords(s));
  return {
      {"lattice", {{"extents", m.lattice().extents()}, {"boundary", to_string(m.lattice().boundary())}}},
      {"kernel", {{"offsets", m.kernel().offsets()}, {"weights", m.kernel().weights()}}},
      {"rates", rates_to_json(m.rates())},
      {"target", {{"sites", sites}, {"threshold", m.target().threshold()}}},
      {"occupancy_cap", m.occupancy_cap()},
  };
}

}  // namespace qsd
