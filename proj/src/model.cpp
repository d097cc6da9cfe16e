#include "hqtcn/model.hpp"

#include <cmath>
#include <stdexcept>

#include "hqtcn/errors.hpp"
#include "hqtcn/parallel.hpp"
#include "hqtcn/rng.hpp"

namespace hqtcn {

namespace {

void check_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw std::invalid_argument(std::string(what) + ": non-finite value");
        }
    }
}

} // namespace

void TimeSeries::validate() const {
    if (channels < 1 || steps < 1) {
        throw DataError("TimeSeries: needs at least one channel and one step");
    }
    if (values.size() != static_cast<std::size_t>(channels) * steps) {
        throw DataError("TimeSeries: value buffer has " + std::to_string(values.size()) +
                        " entries, expected " + std::to_string(channels * steps));
    }
    check_finite(values, "TimeSeries");
    if (!target_steps.empty()) {
        if (target_steps.size() != static_cast<std::size_t>(steps)) {
            throw DataError("TimeSeries: per-step target length mismatch");
        }
        check_finite(target_steps, "TimeSeries targets");
    }
}

void ModelConfig::validate() const {
    if (kernel < 1) throw std::invalid_argument("ModelConfig: kernel must be >= 1");
    if (dilation < 1) throw std::invalid_argument("ModelConfig: dilation must be >= 1");
    if (embed_dim < 2 || embed_dim % 2 != 0) {
        throw std::invalid_argument("ModelConfig: embedding width must be even and >= 2");
    }
    if (n_layers < 1) throw std::invalid_argument("ModelConfig: layers must be >= 1");
    const int q = circuit_qubits();
    if (q < 2 || q % 2 != 0 || q > StateVector::kMaxQubits) {
        throw std::invalid_argument("ModelConfig: circuit width must be even and in [2, " +
                                    std::to_string(StateVector::kMaxQubits) + "]");
    }
}

HqtcnParams HqtcnParams::init(const ModelConfig& cfg, int channels, std::uint64_t seed,
                              double init_scale) {
    cfg.validate();
    HqtcnParams p;
    p.in_features = channels * cfg.kernel;
    p.embed_dim = cfg.embed_dim;
    p.qubits = cfg.circuit_qubits();
    p.w_fc.assign(static_cast<std::size_t>(p.in_features) * p.embed_dim, 0.0);
    p.b_fc.assign(static_cast<std::size_t>(p.embed_dim), 0.0);
    if (cfg.has_bottleneck()) {
        Rng proj_rng = substream(seed, 0x70726f6aULL);
        p.w_proj.resize(static_cast<std::size_t>(p.embed_dim) * p.qubits);
        for (double& w : p.w_proj) {
            w = proj_rng.normal() / std::sqrt(static_cast<double>(p.embed_dim));
        }
        p.b_proj.assign(static_cast<std::size_t>(p.qubits), 0.0);
    }
    p.circuit = CircuitParams(p.qubits, cfg.n_layers);
    Rng theta_rng = substream(seed, 0x7468657461ULL);
    for (double& t : p.circuit.theta) t = theta_rng.uniform(-init_scale, init_scale);
    return p;
}

std::size_t HqtcnParams::total_count() const {
    return w_fc.size() + b_fc.size() + w_proj.size() + b_proj.size() + circuit.theta.size();
}

std::vector<double> HqtcnParams::to_flat() const {
    std::vector<double> flat;
    flat.reserve(total_count());
    flat.insert(flat.end(), w_fc.begin(), w_fc.end());
    flat.insert(flat.end(), b_fc.begin(), b_fc.end());
    flat.insert(flat.end(), w_proj.begin(), w_proj.end());
    flat.insert(flat.end(), b_proj.begin(), b_proj.end());
    flat.insert(flat.end(), circuit.theta.begin(), circuit.theta.end());
    return flat;
}

void HqtcnParams::from_flat(std::span<const double> flat) {
    if (flat.size() != total_count()) {
        throw std::invalid_argument("HqtcnParams: flat vector has " + std::to_string(flat.size()) +
                                    " entries, expected " + std::to_string(total_count()));
    }
    std::size_t o = 0;
    auto take = [&](std::vector<double>& dst) {
        std::copy(flat.begin() + o, flat.begin() + o + dst.size(), dst.begin());
        o += dst.size();
    };
    take(w_fc);
    take(b_fc);
    take(w_proj);
    take(b_proj);
    take(circuit.theta);
}

void HqtcnParams::validate() const {
    if (w_fc.size() != static_cast<std::size_t>(in_features) * embed_dim ||
        b_fc.size() != static_cast<std::size_t>(embed_dim)) {
        throw std::invalid_argument("HqtcnParams: embedding stage shape mismatch");
    }
    const bool bridged = qubits != embed_dim;
    if (bridged && (w_proj.size() != static_cast<std::size_t>(embed_dim) * qubits ||
                    b_proj.size() != static_cast<std::size_t>(qubits))) {
        throw std::invalid_argument("HqtcnParams: bridge stage shape mismatch");
    }
    if (!bridged && (!w_proj.empty() || !b_proj.empty())) {
        throw std::invalid_argument("HqtcnParams: unexpected bridge stage");
    }
    check_finite(w_fc, "HqtcnParams");
    check_finite(b_fc, "HqtcnParams");
    check_finite(w_proj, "HqtcnParams");
    check_finite(b_proj, "HqtcnParams");
    circuit.validate();
}

std::vector<int> window_indices(int t, int kernel, int dilation) {
    if (kernel < 1 || dilation < 1) {
        throw std::invalid_argument("window_indices: kernel and dilation must be >= 1");
    }
    if (t < dilation * (kernel - 1)) {
        throw std::invalid_argument("window_indices: t=" + std::to_string(t) +
                                    " precedes the first full window at t=" +
                                    std::to_string(dilation * (kernel - 1)));
    }
    std::vector<int> idx(static_cast<std::size_t>(kernel));
    for (int j = 0; j < kernel; ++j) {
        idx[static_cast<std::size_t>(j)] = t - dilation * (kernel - 1 - j);
    }
    return idx;
}

int receptive_field(int kernel, int dilation) {
    if (kernel < 1 || dilation < 1) {
        throw std::invalid_argument("receptive_field: kernel and dilation must be >= 1");
    }
    return dilation * (kernel - 1) + 1;
}

std::vector<std::vector<double>> extract_windows(const TimeSeries& series, int kernel,
                                                 int dilation) {
    series.validate();
    const int lead = dilation * (kernel - 1);
    if (series.steps <= lead) {
        throw DataError("extract_windows: series has " + std::to_string(series.steps) +
                        " steps but kernel " + std::to_string(kernel) + " at dilation " +
                        std::to_string(dilation) + " needs at least " + std::to_string(lead + 1));
    }
    std::vector<std::vector<double>> windows;
    windows.reserve(static_cast<std::size_t>(series.steps - lead));
    for (int t = lead; t < series.steps; ++t) {
        std::vector<double> w(static_cast<std::size_t>(series.channels) * kernel);
        for (int c = 0; c < series.channels; ++c) {
            for (int j = 0; j < kernel; ++j) {
                w[static_cast<std::size_t>(c) * kernel + j] =
                    series.at(c, t - dilation * (kernel - 1 - j));
            }
        }
        windows.push_back(std::move(w));
    }
    return windows;
}

namespace {

// Flattened window -> circuit feature vector, without revalidating params.
void embed_window(std::span<const double> window, const HqtcnParams& p,
                  std::vector<double>& stage1, std::vector<double>& features) {
    stage1.assign(static_cast<std::size_t>(p.embed_dim), 0.0);
    for (int i = 0; i < p.in_features; ++i) {
        const double wi = window[static_cast<std::size_t>(i)];
        const double* row = p.w_fc.data() + static_cast<std::size_t>(i) * p.embed_dim;
        for (int j = 0; j < p.embed_dim; ++j) stage1[static_cast<std::size_t>(j)] += wi * row[j];
    }
    for (int j = 0; j < p.embed_dim; ++j) stage1[static_cast<std::size_t>(j)] += p.b_fc[static_cast<std::size_t>(j)];

    if (p.w_proj.empty()) {
        features = stage1;
        return;
    }
    features.assign(static_cast<std::size_t>(p.qubits), 0.0);
    for (int i = 0; i < p.embed_dim; ++i) {
        const double ei = stage1[static_cast<std::size_t>(i)];
        const double* row = p.w_proj.data() + static_cast<std::size_t>(i) * p.qubits;
        for (int j = 0; j < p.qubits; ++j) features[static_cast<std::size_t>(j)] += ei * row[j];
    }
    for (int j = 0; j < p.qubits; ++j) features[static_cast<std::size_t>(j)] += p.b_proj[static_cast<std::size_t>(j)];
}

void check_model_inputs(const TimeSeries& series, const HqtcnParams& params,
                        const ModelConfig& cfg) {
    cfg.validate();
    params.validate();
    series.validate();
    if (params.in_features != series.channels * cfg.kernel) {
        throw std::invalid_argument("hqtcn: parameters were built for " +
                                    std::to_string(params.in_features) +
                                    " window features, series provides " +
                                    std::to_string(series.channels * cfg.kernel));
    }
    if (params.embed_dim != cfg.embed_dim || params.qubits != cfg.circuit_qubits() ||
        params.circuit.n_layers != cfg.n_layers) {
        throw std::invalid_argument("hqtcn: parameter shape does not match model config");
    }
}

} // namespace

std::vector<double> linear_embed(std::span<const double> window, const HqtcnParams& params) {
    params.validate();
    if (window.size() != static_cast<std::size_t>(params.in_features)) {
        throw std::invalid_argument("linear_embed: window has " + std::to_string(window.size()) +
                                    " entries, expected " + std::to_string(params.in_features));
    }
    check_finite(window, "linear_embed");
    std::vector<double> stage1, features;
    embed_window(window, params, stage1, features);
    return features;
}

WindowRange full_window_range(const TimeSeries& series, const ModelConfig& cfg) {
    return {cfg.dilation * (cfg.kernel - 1), series.steps};
}

std::vector<double> hqtcn_forward_range(const TimeSeries& series, const HqtcnParams& params,
                                        const ModelConfig& cfg, WindowRange range, int threads) {
    check_model_inputs(series, params, cfg);
    const int lead = cfg.dilation * (cfg.kernel - 1);
    if (range.begin_t < lead || range.end_t > series.steps || range.begin_t > range.end_t) {
        throw std::invalid_argument("hqtcn: window range out of bounds");
    }
    const int count = range.end_t - range.begin_t;
    std::vector<double> outputs(static_cast<std::size_t>(count));
    parallel_for(count, threads, [&](int begin, int end, int) {
        QcnnEngine engine(params.qubits, params.circuit.n_layers);
        std::vector<double> window(static_cast<std::size_t>(params.in_features));
        std::vector<double> stage1, features;
        for (int i = begin; i < end; ++i) {
            const int t = range.begin_t + i;
            for (int c = 0; c < series.channels; ++c) {
                for (int j = 0; j < cfg.kernel; ++j) {
                    window[static_cast<std::size_t>(c) * cfg.kernel + j] =
                        series.at(c, t - cfg.dilation * (cfg.kernel - 1 - j));
                }
            }
            embed_window(window, params, stage1, features);
            outputs[static_cast<std::size_t>(i)] = engine.forward(features, params.circuit);
        }
    });
    return outputs;
}

std::vector<double> hqtcn_forward(const TimeSeries& series, const HqtcnParams& params,
                                  const ModelConfig& cfg, int threads) {
    check_model_inputs(series, params, cfg);
    const int lead = cfg.dilation * (cfg.kernel - 1);
    if (series.steps <= lead) {
        throw DataError("hqtcn_forward: series has " + std::to_string(series.steps) +
                        " steps but the first full window sits at t=" + std::to_string(lead));
    }
    return hqtcn_forward_range(series, params, cfg, full_window_range(series, cfg), threads);
}

double aggregate(std::span<const double> outputs) {
    if (outputs.empty()) {
        throw std::invalid_argument("aggregate: empty output vector");
    }
    double s = 0.0;
    for (double o : outputs) s += o;
    return s / static_cast<double>(outputs.size());
}

ModelPrediction model_output(const TimeSeries& series, const HqtcnParams& params,
                             const ModelConfig& cfg, int threads) {
    ModelPrediction pred;
    pred.per_step = hqtcn_forward(series, params, cfg, threads);
    pred.score = aggregate(pred.per_step);
    return pred;
}

ParamCount hqtcn_param_count(int channels, const ModelConfig& cfg) {
    cfg.validate();
    if (channels < 1) throw std::invalid_argument("hqtcn_param_count: channels must be >= 1");
    ParamCount pc;
    pc.classical = static_cast<long>(channels) * cfg.kernel * cfg.embed_dim + cfg.embed_dim;
    if (cfg.has_bottleneck()) {
        pc.classical += static_cast<long>(cfg.embed_dim + 1) * cfg.circuit_qubits();
    }
    pc.quantum = quantum_param_count(cfg.circuit_qubits(), cfg.n_layers);
    return pc;
}

ParamCount model_param_count(int channels, int kernel, int embed_dim, int n_layers) {
    ModelConfig cfg;
    cfg.kernel = kernel;
    cfg.dilation = 1;
    cfg.embed_dim = embed_dim;
    cfg.n_layers = n_layers;
    cfg.qubits = 8;
    return hqtcn_param_count(channels, cfg);
}

std::vector<double> hqtcn_gradient(const TimeSeries& series, const HqtcnParams& params,
                                   const ModelConfig& cfg, WindowRange range,
                                   std::span<const double> upstream, int threads,
                                   std::vector<double>* outputs) {
    check_model_inputs(series, params, cfg);
    const int lead = cfg.dilation * (cfg.kernel - 1);
    if (range.begin_t < lead || range.end_t > series.steps || range.begin_t > range.end_t) {
        throw std::invalid_argument("hqtcn_gradient: window range out of bounds");
    }
    const int count = range.end_t - range.begin_t;
    if (upstream.size() != static_cast<std::size_t>(count)) {
        throw std::invalid_argument("hqtcn_gradient: upstream has " +
                                    std::to_string(upstream.size()) + " entries, expected " +
                                    std::to_string(count));
    }

    const std::size_t n_theta = params.circuit.theta.size();
    const std::size_t n_feat = static_cast<std::size_t>(params.qubits);

    // Per-window pieces, stored by window index so the final accumulation is
    // a fixed-order sum independent of the thread schedule.
    std::vector<double> theta_grads(static_cast<std::size_t>(count) * n_theta);
    std::vector<double> feat_grads(static_cast<std::size_t>(count) * n_feat);
    std::vector<double> stage1_all; // only needed when a bridge stage exists
    const bool bridged = !params.w_proj.empty();
    if (bridged) stage1_all.resize(static_cast<std::size_t>(count) * params.embed_dim);
    std::vector<double> values(static_cast<std::size_t>(count));

    parallel_for(count, threads, [&](int begin, int end, int) {
        QcnnEngine engine(params.qubits, params.circuit.n_layers);
        QcnnGradient g;
        std::vector<double> window(static_cast<std::size_t>(params.in_features));
        std::vector<double> stage1, features;
        for (int i = begin; i < end; ++i) {
            const int t = range.begin_t + i;
            for (int c = 0; c < series.channels; ++c) {
                for (int j = 0; j < cfg.kernel; ++j) {
                    window[static_cast<std::size_t>(c) * cfg.kernel + j] =
                        series.at(c, t - cfg.dilation * (cfg.kernel - 1 - j));
                }
            }
            embed_window(window, params, stage1, features);
            engine.gradient(features, params.circuit, g);
            values[static_cast<std::size_t>(i)] = g.value;
            std::copy(g.theta.begin(), g.theta.end(),
                      theta_grads.begin() + static_cast<std::size_t>(i) * n_theta);
            std::copy(g.features.begin(), g.features.end(),
                      feat_grads.begin() + static_cast<std::size_t>(i) * n_feat);
            if (bridged) {
                std::copy(stage1.begin(), stage1.end(),
                          stage1_all.begin() + static_cast<std::size_t>(i) * params.embed_dim);
            }
        }
    });

    if (outputs != nullptr) *outputs = values;

    std::vector<double> grad(params.total_count(), 0.0);
    const std::size_t o_wfc = 0;
    const std::size_t o_bfc = params.w_fc.size();
    const std::size_t o_wproj = o_bfc + params.b_fc.size();
    const std::size_t o_bproj = o_wproj + params.w_proj.size();
    const std::size_t o_theta = o_bproj + params.b_proj.size();

    std::vector<double> window(static_cast<std::size_t>(params.in_features));
    std::vector<double> d_stage1(static_cast<std::size_t>(params.embed_dim));
    for (int i = 0; i < count; ++i) {
        const double up = upstream[static_cast<std::size_t>(i)];
        if (up == 0.0) continue;
        const int t = range.begin_t + i;

        const double* g_theta = theta_grads.data() + static_cast<std::size_t>(i) * n_theta;
        for (std::size_t k = 0; k < n_theta; ++k) grad[o_theta + k] += up * g_theta[k];

        const double* g_feat = feat_grads.data() + static_cast<std::size_t>(i) * n_feat;

        if (bridged) {
            const double* stage1 = stage1_all.data() + static_cast<std::size_t>(i) * params.embed_dim;
            for (int r = 0; r < params.embed_dim; ++r) {
                double acc = 0.0;
                const double* row = params.w_proj.data() + static_cast<std::size_t>(r) * params.qubits;
                for (int c = 0; c < params.qubits; ++c) {
                    grad[o_wproj + static_cast<std::size_t>(r) * params.qubits + c] +=
                        up * stage1[r] * g_feat[c];
                    acc += row[c] * g_feat[c];
                }
                d_stage1[static_cast<std::size_t>(r)] = acc;
            }
            for (int c = 0; c < params.qubits; ++c) grad[o_bproj + c] += up * g_feat[c];
        } else {
            for (int r = 0; r < params.embed_dim; ++r) d_stage1[static_cast<std::size_t>(r)] = g_feat[r];
        }

        for (int c = 0; c < series.channels; ++c) {
            for (int j = 0; j < cfg.kernel; ++j) {
                window[static_cast<std::size_t>(c) * cfg.kernel + j] =
                    series.at(c, t - cfg.dilation * (cfg.kernel - 1 - j));
            }
        }
        for (int r = 0; r < params.in_features; ++r) {
            const double wr = up * window[static_cast<std::size_t>(r)];
            double* dst = grad.data() + o_wfc + static_cast<std::size_t>(r) * params.embed_dim;
            for (int cidx = 0; cidx < params.embed_dim; ++cidx) {
                dst[cidx] += wr * d_stage1[static_cast<std::size_t>(cidx)];
            }
        }
        for (int cidx = 0; cidx < params.embed_dim; ++cidx) {
            grad[o_bfc + cidx] += up * d_stage1[static_cast<std::size_t>(cidx)];
        }
    }
    return grad;
}

} // namespace hqtcn
