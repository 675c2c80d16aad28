#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "b3opt/train/trainer.hpp"

namespace b3opt::train {

struct SearchSpace {
    double lr_lo = 1e-5, lr_hi = 1e-3;               // log-uniform
    std::vector<int> hidden_choices{64, 128, 256, 512};
    double dropout_lo = 0.1, dropout_hi = 0.5;       // uniform
    double wd_lo = 1e-6, wd_hi = 1e-3;               // log-uniform
    int trials = 20;
    int epochs_per_trial = 10;
};

struct TrialRecord {
    int index = 0;
    double lr = 0, dropout_p = 0, weight_decay = 0;
    int hidden_size = 0;
    bool failed = false;  // diverged (non-finite loss)
    double best_val_loss = 0;
    std::vector<EpochRecord> history;
};

struct SearchResult {
    TrainConfig best;  // lowest validation loss among non-failed trials
    int best_trial = -1;
    std::vector<TrialRecord> trials;
};

// Seeded random search; each candidate trains for epochs_per_trial epochs
// and is scored by its best validation loss. Divergent trials are recorded
// as failed, not fatal.
SearchResult hyperparameter_search(const SearchSpace& space,
                                   std::span<const data::DatasetRow> train_rows,
                                   std::span<const data::DatasetRow> val_rows,
                                   const TrainConfig& base, uint64_t seed);

}  // namespace b3opt::train
