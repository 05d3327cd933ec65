#include "qsd/dynamics/trajectory.hpp"

#include <fstream>

#include "json.hpp"
#include "qsd/core/error.hpp"
#include "qsd/dynamics/simulator.hpp"

namespace qsd {

std::string to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::hit_target:
      return "hit_target";
    case TerminalStatus::censored:
      return "censored";
    case TerminalStatus::absorbed:
      return "absorbed";
  }
  return "?";
}

Configuration Trajectory::replay(std::size_t n, const Model& m) const {
  Configuration c = initial;
  for (std::size_t k = 0; k < n && k < events.size(); ++k) c = m.apply_jump(std::move(c), events[k].from, events[k].to);
  return c;
}

bool Trajectory::consistent(const Model& m) const {
  Configuration c = initial;
  double t = 0.0;
  if (m.in_target(c) && !events.empty()) return false;
  for (std::size_t k = 0; k < events.size(); ++k) {
    const auto& e = events[k];
    if (!(e.time > t)) return false;
    if (m.jump_rate(c, e.from, e.to) <= 0.0) return false;
    c = m.apply_jump(std::move(c), e.from, e.to);
    t = e.time;
    const bool last = k + 1 == events.size();
    if (m.in_target(c) && !(last && status == TerminalStatus::hit_target)) return false;
  }
  if (status == TerminalStatus::hit_target) return m.in_target(c);
  return true;
}

HittingResult simulate_killed(const Configuration& initial, const Model& m, double t_max,
                              Philox4x32& rng, bool record, const SojournVisitor* visitor) {
  HittingResult r;
  r.stream = rng.stream();
  if (record) r.trajectory = Trajectory{initial, {}, 0.0, TerminalStatus::hit_target};
  if (m.in_target(initial)) {
    r.tau = 0.0;
    r.status = TerminalStatus::hit_target;
    return r;
  }
  Simulator sim(m, initial);
  double t = 0.0;
  for (;;) {
    const double total = sim.total_rate();
    if (!(total > 0.0)) {
      r.status = TerminalStatus::absorbed;
      break;
    }
    const double next = t + rng.exponential(total);
    if (next >= t_max) {
      r.status = TerminalStatus::censored;
      break;
    }
    if (visitor) (*visitor)(sim.state(), t, next);
    const Jump j = sim.choose(rng);
    sim.apply(j);
    t = next;
    ++r.n_events;
    if (record) r.trajectory->events.push_back({t, j.from, j.to});
    if (m.in_target(sim.state())) {
      r.tau = t;
      r.status = TerminalStatus::hit_target;
      if (record) r.trajectory->terminal_time = t;
      return r;
    }
  }
  if (visitor) (*visitor)(sim.state(), t, t_max);
  r.tau = t_max;
  if (record) {
    r.trajectory->terminal_time = t_max;
    r.trajectory->status = r.status;
  }
  return r;
}

Configuration simulate_free(const Configuration& initial, const Model& m, double t_end, Philox4x32& rng) {
  Simulator sim(m, initial);
  double t = 0.0;
  while (sim.total_rate() > 0.0) {
    t += rng.exponential(sim.total_rate());
    if (t >= t_end) break;
    sim.apply(sim.choose(rng));
  }
  return sim.state();
}

void write_trajectory(const Trajectory& tr, const std::filesystem::path& path) {
  nlohmann::json j;
  j["format"] = "qsd-trajectory";
  j["version"] = kTrajectoryFormatVersion;
  j["initial"] = std::vector<int>(tr.initial.occupancy().begin(), tr.initial.occupancy().end());
  auto& ev = j["events"] = nlohmann::json::array();
  for (const auto& e : tr.events) ev.push_back({e.time, e.from, e.to});
  j["terminal_time"] = tr.terminal_time;
  j["status"] = to_string(tr.status);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump() << '\n';
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    auto j = nlohmann::json::parse(in);
    if (j.at("format") != "qsd-trajectory" || j.at("version") != kTrajectoryFormatVersion)
      throw IoError("unsupported trajectory format");
    Trajectory tr;
    tr.initial = Configuration(j.at("initial").get<std::vector<int>>());
    for (const auto& e : j.at("events"))
      tr.events.push_back({e.at(0).get<double>(), e.at(1).get<Site>(), e.at(2).get<Site>()});
    tr.terminal_time = j.at("terminal_time").get<double>();
    const auto s = j.at("status").get<std::string>();
    tr.status = s == "hit_target" ? TerminalStatus::hit_target
                : s == "absorbed" ? TerminalStatus::absorbed
                                  : TerminalStatus::censored;
    return tr;
  } catch (const nlohmann::json::exception& ex) {
    throw IoError("bad trajectory file: " + std::string(ex.what()));
  }
}

}  // namespace qsd
