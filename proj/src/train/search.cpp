#include "b3opt/train/search.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "b3opt/core/errors.hpp"

namespace b3opt::train {

SearchResult hyperparameter_search(const SearchSpace& space,
                                   std::span<const data::DatasetRow> train_rows,
                                   std::span<const data::DatasetRow> val_rows,
                                   const TrainConfig& base, uint64_t seed) {
    if (space.trials < 1) throw InputError("search needs at least one trial");
    if (space.hidden_choices.empty()) throw InputError("empty hidden-size choice list");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> log_lr(std::log(space.lr_lo), std::log(space.lr_hi));
    std::uniform_real_distribution<double> log_wd(std::log(space.wd_lo), std::log(space.wd_hi));
    std::uniform_real_distribution<double> dropout(space.dropout_lo, space.dropout_hi);
    std::uniform_int_distribution<size_t> hidden(0, space.hidden_choices.size() - 1);

    SearchResult result;
    double best_loss = std::numeric_limits<double>::infinity();

    for (int t = 0; t < space.trials; ++t) {
        TrialRecord rec;
        rec.index = t;
        rec.lr = std::exp(log_lr(rng));
        rec.hidden_size = space.hidden_choices[hidden(rng)];
        rec.dropout_p = dropout(rng);
        rec.weight_decay = std::exp(log_wd(rng));

        TrainConfig config = base;
        config.lr = rec.lr;
        config.weight_decay = rec.weight_decay;
        config.max_epochs = space.epochs_per_trial;
        config.patience = space.epochs_per_trial;  // no early stop inside a trial
        config.net.hidden_size = rec.hidden_size;
        config.net.dropout_p = rec.dropout_p;

        try {
            TrainResult trained = train(train_rows, val_rows, config,
                                        seed * 1000003ull + static_cast<uint64_t>(t));
            rec.best_val_loss = trained.report.best_val_loss;
            rec.history = trained.report.history;
            if (rec.best_val_loss < best_loss) {
                best_loss = rec.best_val_loss;
                result.best = config;
                result.best_trial = t;
            }
        } catch (const NumericError&) {
            rec.failed = true;
        }
        result.trials.push_back(std::move(rec));
    }

    if (result.best_trial < 0) throw NumericError("every search trial diverged");
    return result;
}

}  // namespace b3opt::train
