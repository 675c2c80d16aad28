#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "b3opt/data/row.hpp"
#include "b3opt/net/model.hpp"

namespace b3opt::train {

struct TrainConfig {
    double lr = 5.74e-5;
    double weight_decay = 1.93e-4;
    int batch_size = 1024;
    int max_epochs = 25;
    int patience = 5;  // epochs without validation improvement before stopping
    uint64_t shuffle_seed = 42;
    net::NetConfig net;
};

struct EpochRecord {
    int epoch = 0;  // 1-based
    double train_loss = 0;
    double val_loss = 0;
    bool improved = false;
};

struct TrainReport {
    std::vector<EpochRecord> history;
    int best_epoch = 0;
    double best_val_loss = 0;
    bool stopped_early = false;
    double wall_seconds = 0;
};

struct TrainResult {
    net::Model model;  // parameters from the best-validation epoch, never the last
    TrainReport report;
};

// Minibatch training under the hybrid loss with Adam and early stopping.
// `seed` drives initialization and dropout; config.shuffle_seed drives the
// epoch shuffles. Non-finite losses abort with NumericError.
TrainResult train(std::span<const data::DatasetRow> train_rows,
                  std::span<const data::DatasetRow> val_rows, const TrainConfig& config,
                  uint64_t seed);

// Feature/target matrices in the fixed feature order.
struct TensorData {
    Eigen::MatrixXd features;  // n x 5
    Eigen::VectorXd market;    // premiums
    Eigen::VectorXd bs;        // closed-form references
};

TensorData to_tensors(std::span<const data::DatasetRow> rows);

// Eval-mode hybrid loss of a model over rows (batched internally).
double validation_loss(const net::Model& model, const TensorData& data);

}  // namespace b3opt::train
