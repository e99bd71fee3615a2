#pragma once

#include <cstdint>
#include <functional>

#include "stm/model.hpp"

namespace stm {

struct TrainSchedule {
  int num_sweeps = 2000;
  int burn_in = 500;
  int sample_lag = 10;

  void validate() const;
  /// True when the state after sweep number `sweep` (1-based) is tallied.
  bool collects(int sweep) const { return sweep > burn_in && (sweep - burn_in) % sample_lag == 0; }
};

/// Called after every sweep with the state; return false to stop early.
using SweepObserver = std::function<bool(const ModelState&)>;

ModelState train(const TrainingData& data, const Hyperparameters& hyper, std::uint64_t seed,
                 const TrainSchedule& schedule, BlockRule rule = BlockRule::AsPrinted,
                 const SweepObserver& observer = {});

/// Runs sweeps until `state.sweep == schedule.num_sweeps`; the tally and trace continue
/// where the state left off, so a resumed run matches an uninterrupted one.
void continue_training(ModelState& state, const TrainingData& data, const TrainSchedule& schedule,
                       const SweepObserver& observer = {});

/// Adds the current doc/source assignments to the tally.
void accumulate(ModelState& state);

/// Chain `c` uses seed `seed` for c == 0 and derive_seed(seed, kChainBase + c) otherwise.
std::uint64_t chain_seed(std::uint64_t seed, int chain);

struct ChainResult {
  ModelState state;
  int chain = 0;
};

/// Independent chains on separate threads; returns the chain with the highest final
/// log joint (lowest index on ties).
ChainResult train_chains(const TrainingData& data, const Hyperparameters& hyper, std::uint64_t seed,
                         const TrainSchedule& schedule, int num_chains, BlockRule rule = BlockRule::AsPrinted);

}  // namespace stm
