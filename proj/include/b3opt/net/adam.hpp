#pragma once

#include <cstdint>

#include "b3opt/net/model.hpp"

namespace b3opt::net {

struct AdamHyper {
    double lr = 5.74e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.0;  // classic L2 term added to the gradient
};

// First and second moment estimates, one pair per parameter tensor.
struct AdamState {
    Gradients m, v;
    uint64_t step = 0;
};

AdamState make_adam_state(const Model& model);

// One bias-corrected Adam update over every parameter tensor.
void adam_step(Model& model, const Gradients& grads, AdamState& state, const AdamHyper& hyper);

}  // namespace b3opt::net
