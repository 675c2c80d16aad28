#include "b3opt/net/adam.hpp"

#include <cmath>

#include "b3opt/core/errors.hpp"

namespace b3opt::net {

namespace {

struct TensorView {
    double* data;
    Eigen::Index size;
};

template <typename M>
std::vector<TensorView> views(M& m) {
    std::vector<TensorView> out;
    for_each_param(m, [&](const char*, auto& t) {
        out.push_back({const_cast<double*>(t.data()), t.size()});
    });
    return out;
}

}  // namespace

AdamState make_adam_state(const Model& model) {
    AdamState state;
    state.m = zero_like(model);
    state.v = zero_like(model);
    return state;
}

void adam_step(Model& model, const Gradients& grads, AdamState& state, const AdamHyper& hyper) {
    auto params = views(model);
    auto g = views(const_cast<Gradients&>(grads));
    auto m = views(state.m);
    auto v = views(state.v);

    state.step += 1;
    double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.step));
    double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.step));

    for (size_t t = 0; t < params.size(); ++t) {
        if (params[t].size != g[t].size || params[t].size != m[t].size)
            throw InputError("adam_step: parameter/gradient shape mismatch");
        double* p = params[t].data;
        const double* gd = g[t].data;
        double* md = m[t].data;
        double* vd = v[t].data;
        for (Eigen::Index i = 0; i < params[t].size; ++i) {
            double grad = gd[i] + hyper.weight_decay * p[i];
            md[i] = hyper.beta1 * md[i] + (1.0 - hyper.beta1) * grad;
            vd[i] = hyper.beta2 * vd[i] + (1.0 - hyper.beta2) * grad * grad;
            double m_hat = md[i] / c1;
            double v_hat = vd[i] / c2;
            p[i] -= hyper.lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
        }
    }
    model.step_count = state.step;
}

}  // namespace b3opt::net
