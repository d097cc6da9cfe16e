#include "hqtcn/optimizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hqtcn/errors.hpp"

namespace hqtcn {

void adam_step(std::vector<double>& params, std::span<const double> grad, AdamState& state,
               const AdamConfig& cfg) {
    if (params.size() != grad.size() || params.size() != state.m.size()) {
        throw std::invalid_argument("adam_step: parameter, gradient and state sizes differ");
    }
    if (cfg.lr <= 0.0 || cfg.weight_decay < 0.0) {
        throw std::invalid_argument("adam_step: lr must be > 0 and weight decay >= 0");
    }
    for (double g : grad) {
        if (!std::isfinite(g)) throw TrainingError("adam_step: non-finite gradient");
    }

    state.step += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= cfg.lr * (mhat / (std::sqrt(vhat) + cfg.eps) + cfg.weight_decay * params[i]);
    }
}

} // namespace hqtcn
