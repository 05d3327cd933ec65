#include "qsd/dynamics/simulator.hpp"

namespace qsd {

Simulator::Simulator(const Model& m, Configuration initial)
    : model_(&m), state_(std::move(initial)), tree_(m.num_sites()) {
  for (Site s = 0; s < m.num_sites(); ++s) refresh(s);
}

void Simulator::refresh(Site s) noexcept { tree_.set(s, model_->site_rate(state_, s)); }

Jump Simulator::choose(Philox4x32& rng) const noexcept {
  const Site i = tree_.find(rng.uniform() * tree_.total());
  const auto& m = *model_;
  const auto dests = m.destinations(i);
  const auto& w = m.kernel().weights();
  double acc = 0.0;
  const double target = rng.uniform() * tree_.rate(i);
  Site last = kNoSite;
  for (std::size_t k = 0; k < dests.size(); ++k) {
    const Site j = dests[k];
    if (j == kNoSite || w[k] <= 0.0) continue;
    const double r = w[k] * m.rates().b(state_[i], state_[j]);
    if (r <= 0.0) continue;
    last = j;
    acc += r;
    if (target < acc) return {i, j};
  }
  return {i, last};
}

void Simulator::apply(Jump j) {
  state_.move(j.from, j.to);
  refresh(j.from);
  refresh(j.to);
  if (model_->rates().depends_on_target()) {
    for (auto [src, k] : model_->sources(j.from)) refresh(src);
    for (auto [src, k] : model_->sources(j.to)) refresh(src);
  }
}

}  // namespace qsd
