#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace b3opt::net {

struct NetConfig {
    int input_dim = 5;  // fixed feature contract
    int hidden_size = 256;
    double dropout_p = 0.2414;
    double leaky_slope = 0.01;
    double bn_momentum = 0.1;
    double bn_epsilon = 1e-5;
};

struct FeatureStats {
    Eigen::RowVectorXd mean;  // 1 x input_dim
    Eigen::RowVectorXd std;   // 1 x input_dim, entries > 0
};

struct BatchNorm {
    Eigen::RowVectorXd gamma, beta;              // trainable
    Eigen::RowVectorXd running_mean, running_var;  // buffers, eval-mode statistics
};

// Residual MLP: standardize -> [FC,BN,LReLU] -> [FC,BN,LReLU]+skip ->
// dropout -> [FC,BN,LReLU] -> dropout -> FC(h->1).
struct Model {
    NetConfig config;
    FeatureStats stats;
    Eigen::MatrixXd w1, w2, w3, w4;  // out x in
    Eigen::RowVectorXd b1, b2, b3, b4;
    BatchNorm bn1, bn2, bn3;
    uint64_t step_count = 0;
};

// Fixed parameter enumeration order shared by the optimizer, the gradient
// container, and the artifact file.
template <typename M, typename F>
void for_each_param(M& model, F&& fn) {
    fn("w1", model.w1);
    fn("b1", model.b1);
    fn("bn1_gamma", model.bn1.gamma);
    fn("bn1_beta", model.bn1.beta);
    fn("w2", model.w2);
    fn("b2", model.b2);
    fn("bn2_gamma", model.bn2.gamma);
    fn("bn2_beta", model.bn2.beta);
    fn("w3", model.w3);
    fn("b3", model.b3);
    fn("bn3_gamma", model.bn3.gamma);
    fn("bn3_beta", model.bn3.beta);
    fn("w4", model.w4);
    fn("b4", model.b4);
}

// Same member paths as Model, so for_each_param applies to both.
struct Gradients {
    Eigen::MatrixXd w1, w2, w3, w4;
    Eigen::RowVectorXd b1, b2, b3, b4;
    struct {
        Eigen::RowVectorXd gamma, beta;
    } bn1, bn2, bn3;
};

// Kaiming-uniform weights scaled for the leaky slope, zero biases,
// identity batch-norm. Deterministic per seed.
Model init_model(const NetConfig& config, uint64_t seed, FeatureStats stats);

FeatureStats compute_feature_stats(const Eigen::MatrixXd& features);

enum class Mode { train, eval };

// Everything backward() needs from the forward pass.
struct ForwardContext {
    Mode mode = Mode::eval;
    Eigen::MatrixXd x_std;                    // standardized input
    Eigen::MatrixXd a1, a2, a3;               // FC pre-activations
    Eigen::MatrixXd xhat1, xhat2, xhat3;      // BN-normalized pre-activations
    Eigen::RowVectorXd mean1, var1, mean2, var2, mean3, var3;  // batch statistics
    Eigen::MatrixXd h1, h2, h3;               // post-LReLU activations
    Eigen::MatrixXd res2;                     // h2 + h1 (residual add)
    Eigen::MatrixXd drop1, drop2;             // post-dropout activations
    Eigen::MatrixXd mask1, mask2;             // inverted-dropout masks (0 or 1/(1-p))
    Eigen::VectorXd pred;                     // network output, one per sample
};

// Train mode uses batch statistics and inverted dropout and updates the
// running statistics; eval mode is deterministic and batch-size invariant.
// Train mode requires batch >= 2.
ForwardContext forward(Model& model, const Eigen::MatrixXd& features, Mode mode,
                       uint64_t dropout_seed = 0);

// Eval-mode predictions without touching the model.
Eigen::VectorXd predict(const Model& model, const Eigen::MatrixXd& features);

struct LossBreakdown {
    double total = 0;
    size_t market_term_count = 0;  // samples with premium > threshold
    size_t bs_term_count = 0;
    Eigen::VectorXd per_sample;
};

inline constexpr double kReliablePremiumThreshold = 0.1;

// Masked hybrid loss: squared error against the market premium when it is
// reliable (> 0.1 BRL), against the closed-form price otherwise; mean over
// the batch.
LossBreakdown hybrid_loss(const Eigen::VectorXd& pred, const Eigen::VectorXd& market,
                          const Eigen::VectorXd& bs);

// d(total)/d(pred).
Eigen::VectorXd hybrid_loss_grad(const Eigen::VectorXd& pred, const Eigen::VectorXd& market,
                                 const Eigen::VectorXd& bs);

// Exact gradients of the hybrid loss for every trainable parameter,
// including the batch-statistics terms and the skip path.
Gradients backward(const Model& model, const ForwardContext& ctx,
                   const Eigen::VectorXd& dloss_dpred);

Gradients zero_like(const Model& model);

}  // namespace b3opt::net
