#include "b3opt/net/model.hpp"

#include <cmath>
#include <random>

#include "b3opt/core/errors.hpp"

namespace b3opt::net {

namespace {

using RowArray = Eigen::Array<double, 1, Eigen::Dynamic>;

void fill_kaiming_uniform(Eigen::MatrixXd& w, double leaky_slope, std::mt19937_64& rng) {
    double gain = std::sqrt(2.0 / (1.0 + leaky_slope * leaky_slope));
    double bound = gain * std::sqrt(3.0 / static_cast<double>(w.cols()));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = dist(rng);
}

BatchNorm identity_bn(int size) {
    BatchNorm bn;
    bn.gamma = Eigen::RowVectorXd::Ones(size);
    bn.beta = Eigen::RowVectorXd::Zero(size);
    bn.running_mean = Eigen::RowVectorXd::Zero(size);
    bn.running_var = Eigen::RowVectorXd::Ones(size);
    return bn;
}

Eigen::MatrixXd leaky_relu(const Eigen::MatrixXd& z, double slope) {
    return (z.array().max(0.0) + slope * z.array().min(0.0)).matrix();
}

// z > 0 iff lrelu(z) > 0 (positive slope), so the activation itself is
// enough to recover the derivative mask.
Eigen::ArrayXXd leaky_relu_deriv(const Eigen::MatrixXd& activated, double slope) {
    return activated.array().unaryExpr([slope](double v) { return v > 0.0 ? 1.0 : slope; });
}

struct BnBatchOut {
    Eigen::MatrixXd xhat, out;
    Eigen::RowVectorXd mean, var;  // biased batch variance
};

BnBatchOut bn_forward_train(const Eigen::MatrixXd& a, const BatchNorm& bn, double eps) {
    BnBatchOut r;
    double n = static_cast<double>(a.rows());
    r.mean = a.colwise().mean();
    Eigen::MatrixXd centered = a.rowwise() - r.mean;
    r.var = (centered.array().square().colwise().sum() / n).matrix();
    RowArray inv_std = (r.var.array() + eps).rsqrt();
    r.xhat = (centered.array().rowwise() * inv_std).matrix();
    r.out = ((r.xhat.array().rowwise() * bn.gamma.array()).rowwise() + bn.beta.array()).matrix();
    return r;
}

Eigen::MatrixXd bn_forward_eval(const Eigen::MatrixXd& a, const BatchNorm& bn, double eps,
                                Eigen::MatrixXd* xhat_out) {
    RowArray inv_std = (bn.running_var.array() + eps).rsqrt();
    Eigen::MatrixXd xhat = ((a.rowwise() - bn.running_mean).array().rowwise() * inv_std).matrix();
    if (xhat_out) *xhat_out = xhat;
    return ((xhat.array().rowwise() * bn.gamma.array()).rowwise() + bn.beta.array()).matrix();
}

void bn_update_running(BatchNorm& bn, const Eigen::RowVectorXd& mean,
                       const Eigen::RowVectorXd& biased_var, double momentum, Eigen::Index n) {
    // Running variance keeps the unbiased estimate, matching the usual
    // framework convention.
    double correction = n > 1 ? static_cast<double>(n) / static_cast<double>(n - 1) : 1.0;
    bn.running_mean = (1.0 - momentum) * bn.running_mean + momentum * mean;
    bn.running_var = (1.0 - momentum) * bn.running_var + momentum * (biased_var * correction);
}

Eigen::MatrixXd draw_mask(Eigen::Index rows, Eigen::Index cols, double p, std::mt19937_64& rng) {
    Eigen::MatrixXd mask(rows, cols);
    if (p <= 0.0) {
        mask.setOnes();
        return mask;
    }
    double scale = 1.0 / (1.0 - p);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) mask(r, c) = unit(rng) < p ? 0.0 : scale;
    return mask;
}

// Backward through train-mode batch norm, including the batch-statistics
// terms. dz is the gradient at the BN output.
Eigen::MatrixXd bn_backward_train(const Eigen::MatrixXd& a, const Eigen::RowVectorXd& mean,
                                  const Eigen::RowVectorXd& var, const Eigen::MatrixXd& xhat,
                                  const Eigen::RowVectorXd& gamma, double eps,
                                  const Eigen::MatrixXd& dz, Eigen::RowVectorXd& dgamma,
                                  Eigen::RowVectorXd& dbeta) {
    const double n = static_cast<double>(a.rows());
    dgamma = (dz.array() * xhat.array()).colwise().sum().matrix();
    dbeta = dz.colwise().sum();

    Eigen::ArrayXXd dxhat = dz.array().rowwise() * gamma.array();
    RowArray inv_std = (var.array() + eps).rsqrt();
    Eigen::ArrayXXd centered = (a.rowwise() - mean).array();

    RowArray dvar = (dxhat * centered).colwise().sum() * (-0.5) * inv_std.pow(3);
    RowArray dmean =
        dxhat.colwise().sum() * (-inv_std) + dvar * (-2.0 / n) * centered.colwise().sum();

    Eigen::ArrayXXd da = dxhat.rowwise() * inv_std + centered.rowwise() * (dvar * (2.0 / n));
    da.rowwise() += dmean / n;
    return da.matrix();
}

}  // namespace

Model init_model(const NetConfig& config, uint64_t seed, FeatureStats stats) {
    if (config.hidden_size <= 0) throw InputError("hidden_size must be positive");
    if (config.input_dim != 5) throw InputError("input_dim is fixed at 5");
    if (config.dropout_p < 0 || config.dropout_p >= 1)
        throw InputError("dropout_p must be in [0, 1)");
    if (stats.mean.size() != config.input_dim || stats.std.size() != config.input_dim)
        throw InputError("feature stats dimension mismatch");
    if ((stats.std.array() <= 0).any()) throw InputError("feature stats std must be positive");

    Model m;
    m.config = config;
    m.stats = std::move(stats);
    int h = config.hidden_size;
    int d = config.input_dim;

    std::mt19937_64 rng(seed);
    m.w1.resize(h, d);
    fill_kaiming_uniform(m.w1, config.leaky_slope, rng);
    m.b1 = Eigen::RowVectorXd::Zero(h);
    m.w2.resize(h, h);
    fill_kaiming_uniform(m.w2, config.leaky_slope, rng);
    m.b2 = Eigen::RowVectorXd::Zero(h);
    m.w3.resize(h, h);
    fill_kaiming_uniform(m.w3, config.leaky_slope, rng);
    m.b3 = Eigen::RowVectorXd::Zero(h);
    m.w4.resize(1, h);
    fill_kaiming_uniform(m.w4, config.leaky_slope, rng);
    m.b4 = Eigen::RowVectorXd::Zero(1);

    m.bn1 = identity_bn(h);
    m.bn2 = identity_bn(h);
    m.bn3 = identity_bn(h);
    return m;
}

FeatureStats compute_feature_stats(const Eigen::MatrixXd& features) {
    if (features.rows() == 0) throw InputError("cannot compute feature stats on an empty matrix");
    FeatureStats s;
    s.mean = features.colwise().mean();
    Eigen::MatrixXd centered = features.rowwise() - s.mean;
    s.std = (centered.array().square().colwise().mean().sqrt().max(1e-8)).matrix();
    return s;
}

namespace {

ForwardContext forward_impl(const Model& model, const Eigen::MatrixXd& features, Mode mode,
                            uint64_t dropout_seed) {
    const NetConfig& cfg = model.config;
    if (features.cols() != cfg.input_dim)
        throw InputError("feature matrix must have " + std::to_string(cfg.input_dim) + " columns");
    if (features.rows() == 0) throw InputError("empty batch");
    if (mode == Mode::train && features.rows() < 2)
        throw InputError("train-mode batch must have >= 2 samples for batch statistics");

    ForwardContext ctx;
    ctx.mode = mode;
    ctx.x_std = ((features.rowwise() - model.stats.mean).array().rowwise() /
                 model.stats.std.array())
                    .matrix();

    std::mt19937_64 dropout_rng(dropout_seed);
    bool train = mode == Mode::train;

    ctx.a1 = (ctx.x_std * model.w1.transpose()).rowwise() + model.b1;
    Eigen::MatrixXd z1;
    if (train) {
        BnBatchOut bn = bn_forward_train(ctx.a1, model.bn1, cfg.bn_epsilon);
        ctx.xhat1 = std::move(bn.xhat);
        ctx.mean1 = std::move(bn.mean);
        ctx.var1 = std::move(bn.var);
        z1 = std::move(bn.out);
    } else {
        z1 = bn_forward_eval(ctx.a1, model.bn1, cfg.bn_epsilon, &ctx.xhat1);
    }
    ctx.h1 = leaky_relu(z1, cfg.leaky_slope);

    ctx.a2 = (ctx.h1 * model.w2.transpose()).rowwise() + model.b2;
    Eigen::MatrixXd z2;
    if (train) {
        BnBatchOut bn = bn_forward_train(ctx.a2, model.bn2, cfg.bn_epsilon);
        ctx.xhat2 = std::move(bn.xhat);
        ctx.mean2 = std::move(bn.mean);
        ctx.var2 = std::move(bn.var);
        z2 = std::move(bn.out);
    } else {
        z2 = bn_forward_eval(ctx.a2, model.bn2, cfg.bn_epsilon, &ctx.xhat2);
    }
    ctx.h2 = leaky_relu(z2, cfg.leaky_slope);
    ctx.res2 = ctx.h2 + ctx.h1;

    if (train) {
        ctx.mask1 = draw_mask(ctx.res2.rows(), ctx.res2.cols(), cfg.dropout_p, dropout_rng);
        ctx.drop1 = ctx.res2.cwiseProduct(ctx.mask1);
    } else {
        ctx.drop1 = ctx.res2;
    }

    ctx.a3 = (ctx.drop1 * model.w3.transpose()).rowwise() + model.b3;
    Eigen::MatrixXd z3;
    if (train) {
        BnBatchOut bn = bn_forward_train(ctx.a3, model.bn3, cfg.bn_epsilon);
        ctx.xhat3 = std::move(bn.xhat);
        ctx.mean3 = std::move(bn.mean);
        ctx.var3 = std::move(bn.var);
        z3 = std::move(bn.out);
    } else {
        z3 = bn_forward_eval(ctx.a3, model.bn3, cfg.bn_epsilon, &ctx.xhat3);
    }
    ctx.h3 = leaky_relu(z3, cfg.leaky_slope);

    if (train) {
        ctx.mask2 = draw_mask(ctx.h3.rows(), ctx.h3.cols(), cfg.dropout_p, dropout_rng);
        ctx.drop2 = ctx.h3.cwiseProduct(ctx.mask2);
    } else {
        ctx.drop2 = ctx.h3;
    }

    ctx.pred = ((ctx.drop2 * model.w4.transpose()).rowwise() + model.b4).col(0);
    return ctx;
}

}  // namespace

ForwardContext forward(Model& model, const Eigen::MatrixXd& features, Mode mode,
                       uint64_t dropout_seed) {
    ForwardContext ctx = forward_impl(model, features, mode, dropout_seed);
    if (mode == Mode::train) {
        Eigen::Index n = features.rows();
        double mom = model.config.bn_momentum;
        bn_update_running(model.bn1, ctx.mean1, ctx.var1, mom, n);
        bn_update_running(model.bn2, ctx.mean2, ctx.var2, mom, n);
        bn_update_running(model.bn3, ctx.mean3, ctx.var3, mom, n);
    }
    return ctx;
}

Eigen::VectorXd predict(const Model& model, const Eigen::MatrixXd& features) {
    return forward_impl(model, features, Mode::eval, 0).pred;
}

LossBreakdown hybrid_loss(const Eigen::VectorXd& pred, const Eigen::VectorXd& market,
                          const Eigen::VectorXd& bs) {
    if (pred.size() == 0) throw InputError("hybrid loss on empty batch");
    if (pred.size() != market.size() || pred.size() != bs.size())
        throw InputError("hybrid loss batch length mismatch");

    LossBreakdown out;
    out.per_sample.resize(pred.size());
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
        bool reliable = market[i] > kReliablePremiumThreshold;
        double target = reliable ? market[i] : bs[i];
        double err = pred[i] - target;
        out.per_sample[i] = err * err;
        if (reliable)
            ++out.market_term_count;
        else
            ++out.bs_term_count;
    }
    out.total = out.per_sample.mean();
    return out;
}

Eigen::VectorXd hybrid_loss_grad(const Eigen::VectorXd& pred, const Eigen::VectorXd& market,
                                 const Eigen::VectorXd& bs) {
    if (pred.size() == 0) throw InputError("hybrid loss on empty batch");
    if (pred.size() != market.size() || pred.size() != bs.size())
        throw InputError("hybrid loss batch length mismatch");
    double n = static_cast<double>(pred.size());
    Eigen::VectorXd grad(pred.size());
    for (Eigen::Index i = 0; i < pred.size(); ++i) {
        double target = market[i] > kReliablePremiumThreshold ? market[i] : bs[i];
        grad[i] = 2.0 * (pred[i] - target) / n;
    }
    return grad;
}

Gradients zero_like(const Model& m) {
    Gradients g;
    g.w1 = Eigen::MatrixXd::Zero(m.w1.rows(), m.w1.cols());
    g.w2 = Eigen::MatrixXd::Zero(m.w2.rows(), m.w2.cols());
    g.w3 = Eigen::MatrixXd::Zero(m.w3.rows(), m.w3.cols());
    g.w4 = Eigen::MatrixXd::Zero(m.w4.rows(), m.w4.cols());
    g.b1 = Eigen::RowVectorXd::Zero(m.b1.size());
    g.b2 = Eigen::RowVectorXd::Zero(m.b2.size());
    g.b3 = Eigen::RowVectorXd::Zero(m.b3.size());
    g.b4 = Eigen::RowVectorXd::Zero(m.b4.size());
    g.bn1.gamma = Eigen::RowVectorXd::Zero(m.bn1.gamma.size());
    g.bn1.beta = Eigen::RowVectorXd::Zero(m.bn1.beta.size());
    g.bn2.gamma = Eigen::RowVectorXd::Zero(m.bn2.gamma.size());
    g.bn2.beta = Eigen::RowVectorXd::Zero(m.bn2.beta.size());
    g.bn3.gamma = Eigen::RowVectorXd::Zero(m.bn3.gamma.size());
    g.bn3.beta = Eigen::RowVectorXd::Zero(m.bn3.beta.size());
    return g;
}

Gradients backward(const Model& model, const ForwardContext& ctx,
                   const Eigen::VectorXd& dloss_dpred) {
    if (ctx.pred.size() != dloss_dpred.size())
        throw InputError("backward: loss gradient size does not match forward context");
    if (ctx.mode != Mode::train)
        throw InputError("backward requires a train-mode forward context");

    const double slope = model.config.leaky_slope;
    const double eps = model.config.bn_epsilon;
    Gradients g = zero_like(model);

    // Output head.
    g.w4 = dloss_dpred.transpose() * ctx.drop2;
    g.b4[0] = dloss_dpred.sum();
    Eigen::MatrixXd ddrop2 = dloss_dpred * model.w4;

    // Block 3.
    Eigen::MatrixXd dh3 = ddrop2.cwiseProduct(ctx.mask2);
    Eigen::MatrixXd dz3 = (dh3.array() * leaky_relu_deriv(ctx.h3, slope)).matrix();
    Eigen::MatrixXd da3 = bn_backward_train(ctx.a3, ctx.mean3, ctx.var3, ctx.xhat3,
                                            model.bn3.gamma, eps, dz3, g.bn3.gamma, g.bn3.beta);
    g.w3 = da3.transpose() * ctx.drop1;
    g.b3 = da3.colwise().sum();
    Eigen::MatrixXd ddrop1 = da3 * model.w3;

    // The residual add feeds gradient to block 2 and the skip path alike.
    Eigen::MatrixXd dres2 = ddrop1.cwiseProduct(ctx.mask1);
    Eigen::MatrixXd dh1 = dres2;

    // Block 2.
    Eigen::MatrixXd dz2 = (dres2.array() * leaky_relu_deriv(ctx.h2, slope)).matrix();
    Eigen::MatrixXd da2 = bn_backward_train(ctx.a2, ctx.mean2, ctx.var2, ctx.xhat2,
                                            model.bn2.gamma, eps, dz2, g.bn2.gamma, g.bn2.beta);
    g.w2 = da2.transpose() * ctx.h1;
    g.b2 = da2.colwise().sum();
    dh1 += da2 * model.w2;

    // Block 1.
    Eigen::MatrixXd dz1 = (dh1.array() * leaky_relu_deriv(ctx.h1, slope)).matrix();
    Eigen::MatrixXd da1 = bn_backward_train(ctx.a1, ctx.mean1, ctx.var1, ctx.xhat1,
                                            model.bn1.gamma, eps, dz1, g.bn1.gamma, g.bn1.beta);
    g.w1 = da1.transpose() * ctx.x_std;
    g.b1 = da1.colwise().sum();

    return g;
}

}  // namespace b3opt::net
