#pragma once

#include <cstdint>
#include <stdexcept>

#include "dra/arrivals.hpp"
#include "dra/channel.hpp"
#include "dra/protocol.hpp"
#include "dra/rng.hpp"

namespace dra {

/// Point of the (backlog, estimator) Markov chain, plus the last slot's
/// feedback and coin for diagnostics.
struct SystemState {
  std::int64_t slot = 0;
  std::int64_t backlog = 0;
  double estimator = 1.0;
  bool prev_success = false;
  int prev_coin = 0;

  void validate() const {
    if (slot < 0) throw std::invalid_argument("SystemState: negative slot");
    if (backlog < 0) throw std::invalid_argument("SystemState: negative backlog");
    if (!(estimator >= 1.0)) throw std::invalid_argument("SystemState: estimator below 1");
  }
};

/// Everything one slot produced. `state` is the post-slot chain point;
/// the rest is what happened inside the slot.
struct SlotResult {
  SystemState state;
  int coin = 0;
  double p = 0.0;
  std::int64_t transmitted = 0;
  FeedbackSymbol fb;
  std::int64_t arrivals = 0;
};

/// Advances the chain one slot: draw the coin, transmit with the
/// protocol's probability, read feedback, then admit this slot's
/// arrivals. The new backlog is backlog - success + arrivals, so message
/// conservation holds exactly by construction.
inline SlotResult step(const SystemState& state, const Protocol& proto,
                       const ArrivalProcess& proc, RngStream& rng) {
  state.validate();
  SlotResult r;
  r.coin = rng.coin();
  r.p = transmit_probability(proto, state.estimator, r.coin);
  r.transmitted = transmit(state.backlog, r.p, rng);
  r.fb = feedback(r.transmitted);
  r.arrivals = sample_arrivals(proc, rng);

  r.state.slot = state.slot + 1;
  r.state.backlog = state.backlog - (r.fb.success ? 1 : 0) + r.arrivals;
  r.state.estimator = update_estimator(proto, state.estimator, r.fb, r.coin);
  r.state.prev_success = r.fb.success;
  r.state.prev_coin = r.coin;
  return r;
}

}  // namespace dra
