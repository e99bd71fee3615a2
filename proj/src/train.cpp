#include "stm/train.hpp"

#include <exception>
#include <optional>
#include <thread>

#include "stm/error.hpp"

namespace stm {

void TrainSchedule::validate() const {
  if (burn_in < 0) throw ValidationError("burn_in must be >= 0");
  if (num_sweeps <= burn_in) throw ValidationError("num_sweeps must exceed burn_in");
  if (sample_lag < 1) throw ValidationError("sample_lag must be >= 1");
}

void accumulate(ModelState& st) {
  for (Eigen::Index d = 0; d < st.latent.doc_type.size(); ++d) ++st.tally.doc_type_hits(d, st.latent.doc_type(d));
  for (Eigen::Index g = 0; g < st.latent.source_type.size(); ++g)
    ++st.tally.source_type_hits(g, st.latent.source_type(g));
  ++st.tally.samples;
}

void continue_training(ModelState& st, const TrainingData& data, const TrainSchedule& schedule,
                       const SweepObserver& observer) {
  schedule.validate();
  while (st.sweep < schedule.num_sweeps) {
    sweep(st, data);
    st.trace.push_back(log_joint(st));
    if (schedule.collects(st.sweep)) accumulate(st);
    if (observer && !observer(st)) break;
  }
}

ModelState train(const TrainingData& data, const Hyperparameters& hyper, std::uint64_t seed,
                 const TrainSchedule& schedule, BlockRule rule, const SweepObserver& observer) {
  schedule.validate();
  if (data.docs.empty()) throw ValidationError("refusing to train on a corpus with zero documents");
  ModelState st = init_state(data, hyper, seed, rule);
  continue_training(st, data, schedule, observer);
  return st;
}

std::uint64_t chain_seed(std::uint64_t seed, int chain) {
  return chain == 0 ? seed : derive_seed(seed, streams::kChainBase + static_cast<std::uint64_t>(chain));
}

ChainResult train_chains(const TrainingData& data, const Hyperparameters& hyper, std::uint64_t seed,
                         const TrainSchedule& schedule, int num_chains, BlockRule rule) {
  if (num_chains < 1) throw ValidationError("--chains must be >= 1");
  std::vector<std::optional<ModelState>> results(static_cast<std::size_t>(num_chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(num_chains));
  auto run = [&](int c) {
    try {
      results[static_cast<std::size_t>(c)] = train(data, hyper, chain_seed(seed, c), schedule, rule);
    } catch (...) {
      errors[static_cast<std::size_t>(c)] = std::current_exception();
    }
  };
  if (num_chains == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    for (int c = 0; c < num_chains; ++c) threads.emplace_back(run, c);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  int best = 0;
  for (int c = 1; c < num_chains; ++c)
    if (results[static_cast<std::size_t>(c)]->trace.back() > results[static_cast<std::size_t>(best)]->trace.back())
      best = c;
  return {std::move(*results[static_cast<std::size_t>(best)]), best};
}

}  // namespace stm
