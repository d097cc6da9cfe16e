#include "hqtcn/circuit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hqtcn/errors.hpp"

namespace hqtcn {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Four-point shift-rule coefficients for generators with eigenvalues
// {0, +-1/2}: f' = c+.[f(x+pi/2)-f(x-pi/2)] - c-.[f(x+3pi/2)-f(x-3pi/2)].
const double kSqrt2 = std::sqrt(2.0);
const double kC4Plus = (kSqrt2 + 1.0) / (4.0 * kSqrt2);
const double kC4Minus = (kSqrt2 - 1.0) / (4.0 * kSqrt2);

struct ShiftTerm {
    double delta;
    double weight;
};

// Two-point rule for Pauli-generator rotations (Rot angles, XX/YY/ZZ
// interaction angles, embedding RY angles).
constexpr ShiftTerm kTwoPoint[] = {
    {+kPi / 2.0, +0.5},
    {-kPi / 2.0, -0.5},
};

void check_even_qubits(int n_qubits, const char* what) {
    if (n_qubits < 2 || n_qubits % 2 != 0 || n_qubits > StateVector::kMaxQubits) {
        throw std::invalid_argument(std::string(what) + ": qubit count must be even and in [2, " +
                                    std::to_string(StateVector::kMaxQubits) + "], got " +
                                    std::to_string(n_qubits));
    }
}

void check_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + ": non-finite value");
        }
    }
}

} // namespace

CircuitParams::CircuitParams(int n_qubits_, int n_layers_)
    : n_qubits(n_qubits_), n_layers(n_layers_) {
    check_even_qubits(n_qubits, "CircuitParams");
    if (n_layers < 1) {
        throw std::invalid_argument("CircuitParams: layer count must be >= 1");
    }
    theta.assign(static_cast<std::size_t>(count(n_qubits, n_layers)), 0.0);
}

int CircuitParams::count(int n_qubits, int n_layers) {
    return quantum_param_count(n_qubits, n_layers);
}

void CircuitParams::validate() const {
    check_even_qubits(n_qubits, "CircuitParams");
    if (n_layers < 1) {
        throw std::invalid_argument("CircuitParams: layer count must be >= 1");
    }
    if (static_cast<int>(theta.size()) != count(n_qubits, n_layers)) {
        throw std::invalid_argument("CircuitParams: angle vector has size " +
                                    std::to_string(theta.size()) + ", expected " +
                                    std::to_string(count(n_qubits, n_layers)));
    }
    check_finite(theta, "CircuitParams");
}

int quantum_param_count(int n_qubits, int n_layers) {
    if (n_qubits < 2 || n_qubits % 2 != 0) {
        throw std::invalid_argument("quantum_param_count: qubit count must be even, got " +
                                    std::to_string(n_qubits));
    }
    if (n_layers < 1) {
        throw std::invalid_argument("quantum_param_count: layer count must be >= 1");
    }
    return n_layers * (15 * n_qubits + 3 * (n_qubits / 2));
}

Gate conv_pair_gate(std::span<const double> p) {
    if (p.size() != 15) {
        throw std::invalid_argument("conv_pair_gate: expected 15 angles, got " +
                                    std::to_string(p.size()));
    }
    const Gate pre = kron2(make_rot_zyz(p[0], p[1], p[2]), make_rot_zyz(p[3], p[4], p[5]));
    const Gate mid = make_ising_xyz(p[6], p[7], p[8]);
    const Gate post = kron2(make_rot_zyz(p[9], p[10], p[11]), make_rot_zyz(p[12], p[13], p[14]));
    return gate_product(post, gate_product(mid, pre));
}

Gate pool_pair_gate(std::span<const double> p) {
    if (p.size() != 3) {
        throw std::invalid_argument("pool_pair_gate: expected 3 angles, got " +
                                    std::to_string(p.size()));
    }
    return make_controlled(make_rot_zyz(p[0], p[1], p[2]));
}

StateVector angle_embed(std::span<const double> features) {
    const int n = static_cast<int>(features.size());
    check_finite(features, "angle_embed");
    StateVector state = basis_state(n);
    for (int q = 0; q < n; ++q) {
        const int targets[1] = {q};
        apply_gate_inplace(state, make_rotation(Axis::Y, features[q]), targets);
    }
    return state;
}

StateVector conv_sublayer(const StateVector& state, std::span<const double> params,
                          std::span<const int> active) {
    const std::size_t blocks = active.size();
    if (blocks < 2) {
        throw std::invalid_argument("conv_sublayer: need at least 2 active qubits");
    }
    if (params.size() != blocks * 15) {
        throw std::invalid_argument("conv_sublayer: expected " + std::to_string(blocks * 15) +
                                    " angles, got " + std::to_string(params.size()));
    }
    check_finite(params, "conv_sublayer");
    StateVector out = state;
    for (std::size_t b = 0; b < blocks; ++b) {
        const int targets[2] = {active[b], active[(b + 1) % blocks]};
        apply_gate_inplace(out, conv_pair_gate(params.subspan(b * 15, 15)), targets);
    }
    return out;
}

StateVector pool_sublayer(const StateVector& state, std::span<const double> params) {
    const int pairs = state.n_qubits / 2;
    if (params.size() != static_cast<std::size_t>(pairs) * 3) {
        throw std::invalid_argument("pool_sublayer: expected " + std::to_string(pairs * 3) +
                                    " angles, got " + std::to_string(params.size()));
    }
    check_finite(params, "pool_sublayer");
    StateVector out = state;
    for (int k = 0; k < pairs; ++k) {
        const int targets[2] = {2 * k + 1, 2 * k};
        apply_gate_inplace(out, pool_pair_gate(params.subspan(static_cast<std::size_t>(k) * 3, 3)),
                           targets);
    }
    return out;
}

QcnnEngine::QcnnEngine(int n_qubits, int n_layers)
    : n_qubits_(n_qubits), n_layers_(n_layers), scratch_(basis_state(n_qubits)) {
    check_even_qubits(n_qubits, "QcnnEngine");
    if (n_layers < 1) {
        throw std::invalid_argument("QcnnEngine: layer count must be >= 1");
    }
    const CircuitParams layout(n_qubits, n_layers);
    for (int q = 0; q < n_qubits; ++q) {
        slots_.push_back({SlotKind::Embed, q, 0, 0, 1});
    }
    for (int l = 0; l < n_layers; ++l) {
        for (int b = 0; b < n_qubits; ++b) {
            slots_.push_back({SlotKind::Conv, b, (b + 1) % n_qubits, layout.conv_offset(l, b), 15});
        }
        for (int k = 0; k < n_qubits / 2; ++k) {
            slots_.push_back({SlotKind::Pool, 2 * k + 1, 2 * k, layout.pool_offset(l, k), 3});
        }
    }
    gates_.resize(slots_.size());
    prefix_.assign(slots_.size() + 1, basis_state(n_qubits));
}

void QcnnEngine::check_inputs(std::span<const double> features,
                              const CircuitParams& params) const {
    if (static_cast<int>(features.size()) != n_qubits_) {
        throw std::invalid_argument("qcnn: feature vector has length " +
                                    std::to_string(features.size()) + ", expected " +
                                    std::to_string(n_qubits_));
    }
    check_finite(features, "qcnn");
    if (params.n_qubits != n_qubits_ || params.n_layers != n_layers_) {
        throw std::invalid_argument("qcnn: parameter shape does not match engine");
    }
    params.validate();
}

Gate QcnnEngine::slot_gate(const Slot& slot, std::span<const double> features,
                           const CircuitParams& params) const {
    switch (slot.kind) {
        case SlotKind::Embed:
            return make_rotation(Axis::Y, features[static_cast<std::size_t>(slot.q0)]);
        case SlotKind::Conv:
            return conv_pair_gate(
                std::span<const double>(params.theta.data() + slot.theta_offset, 15));
        case SlotKind::Pool:
        default:
            // Kept as the bare 2x2 rotation; application goes through the
            // controlled fast path.
            return make_rot_zyz(params.theta[static_cast<std::size_t>(slot.theta_offset)],
                                params.theta[static_cast<std::size_t>(slot.theta_offset) + 1],
                                params.theta[static_cast<std::size_t>(slot.theta_offset) + 2]);
    }
}

void QcnnEngine::apply_slot(StateVector& state, const Slot& slot, const Gate& gate) {
    switch (slot.kind) {
        case SlotKind::Embed: {
            const int t[1] = {slot.q0};
            apply_gate_inplace(state, gate, t);
            break;
        }
        case SlotKind::Conv: {
            const int t[2] = {slot.q0, slot.q1};
            apply_gate_inplace(state, gate, t);
            break;
        }
        case SlotKind::Pool:
            apply_controlled_inplace(state, gate, slot.q0, slot.q1);
            break;
    }
}

Gate QcnnEngine::slot_gate_shifted(const Slot& slot, std::span<const double> features,
                                   const CircuitParams& params, int coord, double delta) const {
    if (slot.kind == SlotKind::Embed) {
        return make_rotation(Axis::Y, features[static_cast<std::size_t>(slot.q0)] + delta);
    }
    double shifted[15];
    for (int i = 0; i < slot.n_coords; ++i) {
        shifted[i] = params.theta[static_cast<std::size_t>(slot.theta_offset + i)];
    }
    shifted[coord] += delta;
    if (slot.kind == SlotKind::Conv) {
        return conv_pair_gate(std::span<const double>(shifted, 15));
    }
    return make_rot_zyz(shifted[0], shifted[1], shifted[2]);
}

void QcnnEngine::run_prefixes(std::span<const double> features, const CircuitParams& params) {
    prefix_[0].amp.assign(prefix_[0].dim(), cdouble{0.0, 0.0});
    prefix_[0].amp[0] = 1.0;
    for (std::size_t s = 0; s < slots_.size(); ++s) {
        gates_[s] = slot_gate(slots_[s], features, params);
        prefix_[s + 1] = prefix_[s];
        apply_slot(prefix_[s + 1], slots_[s], gates_[s]);
    }
}

double QcnnEngine::replay_suffix(std::size_t slot_index, const Gate& shifted) {
    scratch_ = prefix_[slot_index];
    apply_slot(scratch_, slots_[slot_index], shifted);
    for (std::size_t s = slot_index + 1; s < slots_.size(); ++s) {
        apply_slot(scratch_, slots_[s], gates_[s]);
    }
    return expectation_pauli_z(scratch_, 0);
}

double QcnnEngine::forward(std::span<const double> features, const CircuitParams& params) {
    check_inputs(features, params);
    run_prefixes(features, params);
    return expectation_pauli_z(prefix_[slots_.size()], 0);
}

void QcnnEngine::gradient(std::span<const double> features, const CircuitParams& params,
                          QcnnGradient& out) {
    check_inputs(features, params);
    run_prefixes(features, params);
    out.value = expectation_pauli_z(prefix_[slots_.size()], 0);
    out.theta.assign(params.theta.size(), 0.0);
    out.features.assign(features.size(), 0.0);

    const ShiftTerm four_point[] = {
        {+kPi / 2.0, +kC4Plus},
        {-kPi / 2.0, -kC4Plus},
        {+3.0 * kPi / 2.0, -kC4Minus},
        {-3.0 * kPi / 2.0, +kC4Minus},
    };

    for (std::size_t s = 0; s < slots_.size(); ++s) {
        const Slot& slot = slots_[s];
        const std::span<const ShiftTerm> terms =
            slot.kind == SlotKind::Pool ? std::span<const ShiftTerm>(four_point)
                                        : std::span<const ShiftTerm>(kTwoPoint);
        for (int c = 0; c < slot.n_coords; ++c) {
            double g = 0.0;
            for (const ShiftTerm& term : terms) {
                g += term.weight *
                     replay_suffix(s, slot_gate_shifted(slot, features, params, c, term.delta));
            }
            if (slot.kind == SlotKind::Embed) {
                out.features[static_cast<std::size_t>(slot.q0)] = g;
            } else {
                out.theta[static_cast<std::size_t>(slot.theta_offset + c)] = g;
            }
        }
    }
}

double qcnn_forward(std::span<const double> features, const CircuitParams& params) {
    QcnnEngine engine(params.n_qubits, params.n_layers);
    return engine.forward(features, params);
}

QcnnGradient qcnn_gradient(std::span<const double> features, const CircuitParams& params) {
    QcnnEngine engine(params.n_qubits, params.n_layers);
    QcnnGradient out;
    engine.gradient(features, params, out);
    return out;
}

} // namespace hqtcn
