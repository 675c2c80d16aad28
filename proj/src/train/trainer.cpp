#include "b3opt/train/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "b3opt/core/errors.hpp"
#include "b3opt/data/dataset.hpp"
#include "b3opt/net/adam.hpp"

namespace b3opt::train {

namespace {

// splitmix64; decorrelates derived seeds (epoch/batch dropout streams).
uint64_t mix_seed(uint64_t a, uint64_t b) {
    uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

TensorData to_tensors(std::span<const data::DatasetRow> rows) {
    TensorData out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), data::kFeatureCount);
    out.market.resize(static_cast<Eigen::Index>(rows.size()));
    out.bs.resize(static_cast<Eigen::Index>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        data::FeatureVector f = data::featurize(rows[i]);
        for (int j = 0; j < data::kFeatureCount; ++j)
            out.features(static_cast<Eigen::Index>(i), j) = f[static_cast<size_t>(j)];
        out.market[static_cast<Eigen::Index>(i)] = rows[i].premium;
        out.bs[static_cast<Eigen::Index>(i)] = rows[i].bs_price;
    }
    return out;
}

double validation_loss(const net::Model& model, const TensorData& data) {
    const Eigen::Index n = data.features.rows();
    const Eigen::Index chunk = 8192;
    double weighted_sum = 0;
    for (Eigen::Index start = 0; start < n; start += chunk) {
        Eigen::Index len = std::min(chunk, n - start);
        Eigen::VectorXd pred = net::predict(model, data.features.middleRows(start, len));
        auto loss = net::hybrid_loss(pred, data.market.segment(start, len),
                                     data.bs.segment(start, len));
        weighted_sum += loss.total * static_cast<double>(len);
    }
    return weighted_sum / static_cast<double>(n);
}

TrainResult train(std::span<const data::DatasetRow> train_rows,
                  std::span<const data::DatasetRow> val_rows, const TrainConfig& config,
                  uint64_t seed) {
    if (train_rows.empty()) throw InputError("training split is empty");
    if (val_rows.empty()) throw InputError("validation split is empty");
    if (config.batch_size < 2) throw InputError("batch_size must be >= 2");
    if (config.max_epochs < 1) throw InputError("max_epochs must be >= 1");
    if (config.patience < 1) throw InputError("patience must be >= 1");

    auto t0 = std::chrono::steady_clock::now();

    TensorData train_data = to_tensors(train_rows);
    TensorData val_data = to_tensors(val_rows);

    net::FeatureStats stats = net::compute_feature_stats(train_data.features);
    net::Model model = net::init_model(config.net, seed, std::move(stats));
    net::AdamState adam = net::make_adam_state(model);
    net::AdamHyper hyper{config.lr, 0.9, 0.999, 1e-8, config.weight_decay};

    const Eigen::Index n = train_data.features.rows();
    std::vector<Eigen::Index> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffle_rng(config.shuffle_seed);

    TrainResult result;
    TrainReport& report = result.report;
    net::Model best = model;
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = 0;
    int epochs_without_improvement = 0;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double epoch_loss_sum = 0;
        Eigen::Index counted = 0;
        Eigen::Index batch_index = 0;
        for (Eigen::Index start = 0; start < n; start += config.batch_size, ++batch_index) {
            Eigen::Index len = std::min<Eigen::Index>(config.batch_size, n - start);
            if (len < 2) continue;  // batch statistics need at least two samples

            Eigen::MatrixXd x(len, data::kFeatureCount);
            Eigen::VectorXd market(len), bs(len);
            for (Eigen::Index i = 0; i < len; ++i) {
                Eigen::Index src = order[static_cast<size_t>(start + i)];
                x.row(i) = train_data.features.row(src);
                market[i] = train_data.market[src];
                bs[i] = train_data.bs[src];
            }

            uint64_t dropout_seed = mix_seed(seed, static_cast<uint64_t>(epoch) * 1000003ull +
                                                       static_cast<uint64_t>(batch_index));
            net::ForwardContext ctx = net::forward(model, x, net::Mode::train, dropout_seed);
            auto loss = net::hybrid_loss(ctx.pred, market, bs);
            if (!std::isfinite(loss.total))
                throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) +
                                   ", batch " + std::to_string(batch_index));
            Eigen::VectorXd dloss = net::hybrid_loss_grad(ctx.pred, market, bs);
            net::Gradients grads = net::backward(model, ctx, dloss);
            net::adam_step(model, grads, adam, hyper);

            epoch_loss_sum += loss.total * static_cast<double>(len);
            counted += len;
        }
        double train_loss = counted > 0 ? epoch_loss_sum / static_cast<double>(counted) : 0.0;

        double val_loss = validation_loss(model, val_data);
        if (!std::isfinite(val_loss))
            throw NumericError("non-finite validation loss at epoch " + std::to_string(epoch));

        bool improved = val_loss < best_val;
        report.history.push_back({epoch, train_loss, val_loss, improved});
        if (improved) {
            best_val = val_loss;
            best_epoch = epoch;
            best = model;
            epochs_without_improvement = 0;
        } else {
            ++epochs_without_improvement;
            if (epochs_without_improvement >= config.patience) {
                report.stopped_early = true;
                break;
            }
        }
    }

    report.best_epoch = best_epoch;
    report.best_val_loss = best_val;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.model = std::move(best);
    return result;
}

}  // namespace b3opt::train
