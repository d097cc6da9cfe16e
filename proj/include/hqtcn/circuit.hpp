#pragma once

#include <span>
#include <vector>

#include "hqtcn/state.hpp"

namespace hqtcn {

// Trainable circuit angles, shared across every temporal window.
// Layout per layer: n_qubits convolution blocks of 15 angles (ring pairs
// (0,1), (1,2), ..., (n-1,0)), then n_qubits/2 pooling blocks of 3 angles
// (controlled rotations on pairs (1->0), (3->2), ...). Layers are stored
// consecutively, so the per-layer stride is 15n + 3n/2.
struct CircuitParams {
    int n_qubits = 8;
    int n_layers = 2;
    std::vector<double> theta;

    CircuitParams() = default;
    CircuitParams(int n_qubits, int n_layers); // zero-initialized

    static int count(int n_qubits, int n_layers);

    int layer_stride() const { return 15 * n_qubits + 3 * (n_qubits / 2); }
    int conv_offset(int layer, int block) const {
        return layer * layer_stride() + 15 * block;
    }
    int pool_offset(int layer, int block) const {
        return layer * layer_stride() + 15 * n_qubits + 3 * block;
    }
    std::span<const double> conv_block(int layer, int block) const {
        return {theta.data() + conv_offset(layer, block), 15};
    }
    std::span<const double> pool_block(int layer, int block) const {
        return {theta.data() + pool_offset(layer, block), 3};
    }

    void validate() const;
};

// L * (15n + 3n/2); n must be even.
int quantum_param_count(int n_qubits, int n_layers);

// Two-qubit convolution unit: local Rot pre-rotations, an XX+YY+ZZ
// interaction, local Rot post-rotations. 15 angles:
// [0..2] Rot on first qubit (pre), [3..5] Rot on second (pre),
// [6..8] interaction (ax, ay, az),
// [9..11] Rot on first (post), [12..14] Rot on second (post).
Gate conv_pair_gate(std::span<const double> p);

// Pooling unit: controlled-Rot(p0, p1, p2), control = first target qubit.
Gate pool_pair_gate(std::span<const double> p);

// RY(feature[i]) on qubit i applied to |0...0>.
StateVector angle_embed(std::span<const double> features);

// One convolution sublayer over the ordered `active` qubits; `params` holds
// active.size() blocks of 15 angles, applied to ring pairs in order.
StateVector conv_sublayer(const StateVector& state, std::span<const double> params,
                          std::span<const int> active);

// One pooling sublayer: controlled rotations on pairs (1->0), (3->2), ...;
// `params` holds n_qubits/2 blocks of 3 angles.
StateVector pool_sublayer(const StateVector& state, std::span<const double> params);

// Full ansatz: embed, then L x (conv, pool), then <Z_0>. Output in [-1, 1].
double qcnn_forward(std::span<const double> features, const CircuitParams& params);

struct QcnnGradient {
    double value = 0.0;
    std::vector<double> theta;    // d(output)/d(circuit angle), CircuitParams layout
    std::vector<double> features; // d(output)/d(embedding feature)
};

// Exact shift-rule gradient of qcnn_forward. Rot angles, interaction angles,
// and embedding angles use the two-point rule at +-pi/2; controlled-rotation
// angles have generator eigenvalues {0, +-1/2} and use the four-point rule.
QcnnGradient qcnn_gradient(std::span<const double> features, const CircuitParams& params);

// Reusable evaluation context: caches the circuit's gate list and the state
// after every gate so each shifted evaluation only replays the suffix.
// One engine per thread; not safe for concurrent use of a single instance.
class QcnnEngine {
public:
    QcnnEngine(int n_qubits, int n_layers);

    double forward(std::span<const double> features, const CircuitParams& params);
    void gradient(std::span<const double> features, const CircuitParams& params,
                  QcnnGradient& out);

    int n_qubits() const { return n_qubits_; }
    int n_layers() const { return n_layers_; }

private:
    enum class SlotKind { Embed, Conv, Pool };
    struct Slot {
        SlotKind kind;
        int q0 = 0;
        int q1 = 0;
        int theta_offset = 0; // circuit-angle offset; embed slots use q0 as feature index
        int n_coords = 1;
    };

    void check_inputs(std::span<const double> features, const CircuitParams& params) const;
    static void apply_slot(StateVector& state, const Slot& slot, const Gate& gate);
    Gate slot_gate(const Slot& slot, std::span<const double> features,
                   const CircuitParams& params) const;
    Gate slot_gate_shifted(const Slot& slot, std::span<const double> features,
                           const CircuitParams& params, int coord, double delta) const;
    void run_prefixes(std::span<const double> features, const CircuitParams& params);
    double replay_suffix(std::size_t slot_index, const Gate& shifted);

    int n_qubits_;
    int n_layers_;
    std::vector<Slot> slots_;
    std::vector<Gate> gates_;          // unshifted gate per slot, rebuilt per call
    std::vector<StateVector> prefix_;  // prefix_[s] = state before slot s
    StateVector scratch_;
};

} // namespace hqtcn
