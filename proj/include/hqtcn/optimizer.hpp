#pragma once

#include <span>
#include <vector>

namespace hqtcn {

struct AdamConfig {
    double lr = 0.005;
    double weight_decay = 0.0; // decoupled: applied directly to the weights
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long step = 0;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// Bias-corrected adaptive-moment update with decoupled weight decay.
// Throws TrainingError on non-finite gradients.
void adam_step(std::vector<double>& params, std::span<const double> grad, AdamState& state,
               const AdamConfig& cfg);

} // namespace hqtcn
