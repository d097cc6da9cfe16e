#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hqtcn/circuit.hpp"
#include "hqtcn/model.hpp"

namespace hqtcn {

// Windowless reference model: the whole C x T series is flattened and fed
// through one affine map into the circuit, so the classical stage scales
// with input size.
struct QcnnBaselineParams {
    int in_features = 0; // channels * steps
    int qubits = 8;
    std::vector<double> w_in; // in_features x qubits, row-major
    std::vector<double> b_in; // qubits
    CircuitParams circuit;

    static QcnnBaselineParams init(int channels, int steps, int qubits, int n_layers,
                                   std::uint64_t seed, double init_scale = 1.0);

    std::size_t total_count() const;
    std::vector<double> to_flat() const;
    void from_flat(std::span<const double> flat);
    void validate() const;
};

ParamCount qcnn_baseline_param_count(int channels, int steps, int qubits, int n_layers);

double qcnn_baseline_forward(const TimeSeries& series, const QcnnBaselineParams& params);

struct QcnnBaselineEval {
    double value = 0.0;
    std::vector<double> grad; // d(value)/d(param), to_flat() order
};

QcnnBaselineEval qcnn_baseline_value_grad(const TimeSeries& series,
                                          const QcnnBaselineParams& params);

// Minimal causal dilated convolution net: `levels` stacked 1-D convolutions
// with dilations 1, 2, 4, ... and ReLU, then a linear per-step readout.
struct TcnConfig {
    int in_channels = 1;
    int hidden = 16;
    int kernel = 3;
    int levels = 3;
    Task task = Task::Regression;

    int receptive_field() const;
    long param_count() const;
    void validate() const;
};

struct TcnParams {
    TcnConfig cfg;
    std::vector<double> flat;

    static TcnParams init(const TcnConfig& cfg, std::uint64_t seed);

    // Offsets into `flat`: per level the kernel block then the bias block.
    std::size_t weight_offset(int level) const;
    std::size_t bias_offset(int level) const;
    std::size_t readout_offset() const;
    int level_in_channels(int level) const;
    void validate() const;
};

// Per-step readout y_t (regression) or its mean (classification score).
// Output at t depends only on inputs at times <= t; missing history is
// zero-padded.
std::vector<double> tcn_forward(const TimeSeries& series, const TcnParams& params);
double tcn_score(const TimeSeries& series, const TcnParams& params);

struct TcnEval {
    std::vector<double> per_step;
    std::vector<double> grad; // d(loss)/d(param) for upstream d(loss)/d(y_t)
};

TcnEval tcn_value_grad(const TimeSeries& series, const TcnParams& params,
                       std::span<const double> upstream);

} // namespace hqtcn
