#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hqtcn/circuit.hpp"

namespace hqtcn {

enum class Task { Regression, Classification };

// C-channel, T-step series. `values` is channels x steps, row-major.
// Regression series carry a per-step target; classification series a label.
struct TimeSeries {
    int channels = 0;
    int steps = 0;
    std::vector<double> values;
    std::vector<double> target_steps;
    int label = -1;

    double at(int c, int t) const { return values[static_cast<std::size_t>(c) * steps + t]; }
    double& at(int c, int t) { return values[static_cast<std::size_t>(c) * steps + t]; }
    void validate() const;
};

struct ModelConfig {
    int kernel = 5;
    int dilation = 2;
    int embed_dim = 8;  // output width of the first fully-connected stage
    int n_layers = 2;
    Task task = Task::Regression;
    // Circuit register width. 0 means embed_dim. When it differs from
    // embed_dim a second linear stage (embed_dim -> qubits) bridges the gap;
    // that is the configuration behind the published embedding-width sweep,
    // which keeps an 8-qubit core for every embedding size.
    int qubits = 0;

    int circuit_qubits() const { return qubits > 0 ? qubits : embed_dim; }
    bool has_bottleneck() const { return circuit_qubits() != embed_dim; }
    void validate() const;
};

struct ParamCount {
    long classical = 0;
    long quantum = 0;
    long total() const { return classical + quantum; }
};

// Trainable state: first linear stage (w_fc, b_fc), optional bridge stage
// (w_proj, b_proj), and the shared circuit angles.
struct HqtcnParams {
    int in_features = 0; // channels * kernel
    int embed_dim = 0;
    int qubits = 0;
    std::vector<double> w_fc;   // in_features x embed_dim, row-major
    std::vector<double> b_fc;   // embed_dim
    std::vector<double> w_proj; // embed_dim x qubits (empty when qubits == embed_dim)
    std::vector<double> b_proj; // qubits (empty when qubits == embed_dim)
    CircuitParams circuit;

    // Linear stages start at zero (bridge weights lightly randomized so the
    // first stage still receives gradient); circuit angles uniform in
    // [-init_scale, init_scale].
    static HqtcnParams init(const ModelConfig& cfg, int channels, std::uint64_t seed,
                            double init_scale = 1.0);

    std::size_t total_count() const;
    std::vector<double> to_flat() const;
    void from_flat(std::span<const double> flat);
    void validate() const;
};

// Eq.-style window index set {t - d(K-1), ..., t - d, t}; requires t >= d(K-1).
std::vector<int> window_indices(int t, int kernel, int dilation);

// d(K-1) + 1.
int receptive_field(int kernel, int dilation);

// Flattened windows w_t for t in [d(K-1), T-1], channel-major: entry c*K + j
// holds channel c at the j-th window index (channel varies slowest).
std::vector<std::vector<double>> extract_windows(const TimeSeries& series, int kernel,
                                                 int dilation);

// Affine embedding of one flattened window; strictly linear, no activation.
std::vector<double> linear_embed(std::span<const double> window, const HqtcnParams& params);

// Per-window circuit outputs o_t for every valid t, in time order. The same
// parameters are used for every window; evaluation parallelizes over windows
// and results are written by index, so the schedule never changes values.
std::vector<double> hqtcn_forward(const TimeSeries& series, const HqtcnParams& params,
                                  const ModelConfig& cfg, int threads = 1);

// Arithmetic mean of the window outputs.
double aggregate(std::span<const double> outputs);

struct ModelPrediction {
    std::vector<double> per_step; // regression: o_t aligned to t >= d(K-1)
    double score = 0.0;           // classification: mean window output
};

ModelPrediction model_output(const TimeSeries& series, const HqtcnParams& params,
                             const ModelConfig& cfg, int threads = 1);

ParamCount hqtcn_param_count(int channels, const ModelConfig& cfg);

// Published-table accounting: embedding width n in front of a fixed 8-qubit
// circuit (bridge stage present whenever n != 8).
ParamCount model_param_count(int channels, int kernel, int embed_dim, int n_layers);

// Windows [begin_t, end_t) by time index; used to restrict training and
// evaluation to one chronological split.
struct WindowRange {
    int begin_t = 0;
    int end_t = 0;
};

WindowRange full_window_range(const TimeSeries& series, const ModelConfig& cfg);

std::vector<double> hqtcn_forward_range(const TimeSeries& series, const HqtcnParams& params,
                                        const ModelConfig& cfg, WindowRange range,
                                        int threads = 1);

// Chain-rule gradient over every trainable parameter, flattened in to_flat()
// order. `upstream[i]` is d(loss)/d(o_t) for the i-th window in `range`.
// Per-window circuit gradients are shared-parameter sums; accumulation runs
// in window order regardless of thread count.
std::vector<double> hqtcn_gradient(const TimeSeries& series, const HqtcnParams& params,
                                   const ModelConfig& cfg, WindowRange range,
                                   std::span<const double> upstream, int threads = 1,
                                   std::vector<double>* outputs = nullptr);

} // namespace hqtcn
