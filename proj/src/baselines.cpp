#include "hqtcn/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "hqtcn/errors.hpp"
#include "hqtcn/rng.hpp"

namespace hqtcn {

QcnnBaselineParams QcnnBaselineParams::init(int channels, int steps, int qubits, int n_layers,
                                            std::uint64_t seed, double init_scale) {
    if (channels < 1 || steps < 1) {
        throw std::invalid_argument("QcnnBaselineParams: channels and steps must be >= 1");
    }
    QcnnBaselineParams p;
    p.in_features = channels * steps;
    p.qubits = qubits;
    p.w_in.assign(static_cast<std::size_t>(p.in_features) * qubits, 0.0);
    p.b_in.assign(static_cast<std::size_t>(qubits), 0.0);
    p.circuit = CircuitParams(qubits, n_layers);
    Rng theta_rng = substream(seed, 0x7468657461ULL);
    for (double& t : p.circuit.theta) t = theta_rng.uniform(-init_scale, init_scale);
    return p;
}

std::size_t QcnnBaselineParams::total_count() const {
    return w_in.size() + b_in.size() + circuit.theta.size();
}

std::vector<double> QcnnBaselineParams::to_flat() const {
    std::vector<double> flat;
    flat.reserve(total_count());
    flat.insert(flat.end(), w_in.begin(), w_in.end());
    flat.insert(flat.end(), b_in.begin(), b_in.end());
    flat.insert(flat.end(), circuit.theta.begin(), circuit.theta.end());
    return flat;
}

void QcnnBaselineParams::from_flat(std::span<const double> flat) {
    if (flat.size() != total_count()) {
        throw std::invalid_argument("QcnnBaselineParams: flat size mismatch");
    }
    std::size_t o = 0;
    std::copy(flat.begin(), flat.begin() + w_in.size(), w_in.begin());
    o += w_in.size();
    std::copy(flat.begin() + o, flat.begin() + o + b_in.size(), b_in.begin());
    o += b_in.size();
    std::copy(flat.begin() + o, flat.end(), circuit.theta.begin());
}

void QcnnBaselineParams::validate() const {
    if (w_in.size() != static_cast<std::size_t>(in_features) * qubits ||
        b_in.size() != static_cast<std::size_t>(qubits)) {
        throw std::invalid_argument("QcnnBaselineParams: input stage shape mismatch");
    }
    circuit.validate();
}

ParamCount qcnn_baseline_param_count(int channels, int steps, int qubits, int n_layers) {
    if (channels < 1 || steps < 1) {
        throw std::invalid_argument("qcnn_baseline_param_count: channels and steps must be >= 1");
    }
    ParamCount pc;
    pc.classical = (static_cast<long>(channels) * steps + 1) * qubits;
    pc.quantum = quantum_param_count(qubits, n_layers);
    return pc;
}

namespace {

void baseline_features(const TimeSeries& series, const QcnnBaselineParams& p,
                       std::vector<double>& features) {
    features.assign(static_cast<std::size_t>(p.qubits), 0.0);
    for (int r = 0; r < p.in_features; ++r) {
        const double x = series.values[static_cast<std::size_t>(r)];
        const double* row = p.w_in.data() + static_cast<std::size_t>(r) * p.qubits;
        for (int c = 0; c < p.qubits; ++c) features[static_cast<std::size_t>(c)] += x * row[c];
    }
    for (int c = 0; c < p.qubits; ++c) features[static_cast<std::size_t>(c)] += p.b_in[static_cast<std::size_t>(c)];
}

void check_baseline_inputs(const TimeSeries& series, const QcnnBaselineParams& params) {
    params.validate();
    series.validate();
    if (series.channels * series.steps != params.in_features) {
        throw std::invalid_argument("qcnn_baseline: parameters expect " +
                                    std::to_string(params.in_features) +
                                    " inputs, series provides " +
                                    std::to_string(series.channels * series.steps));
    }
}

} // namespace

double qcnn_baseline_forward(const TimeSeries& series, const QcnnBaselineParams& params) {
    check_baseline_inputs(series, params);
    std::vector<double> features;
    baseline_features(series, params, features);
    return qcnn_forward(features, params.circuit);
}

QcnnBaselineEval qcnn_baseline_value_grad(const TimeSeries& series,
                                          const QcnnBaselineParams& params) {
    check_baseline_inputs(series, params);
    std::vector<double> features;
    baseline_features(series, params, features);

    QcnnEngine engine(params.qubits, params.circuit.n_layers);
    QcnnGradient g;
    engine.gradient(features, params.circuit, g);

    QcnnBaselineEval out;
    out.value = g.value;
    out.grad.assign(params.total_count(), 0.0);
    const std::size_t o_b = params.w_in.size();
    const std::size_t o_theta = o_b + params.b_in.size();
    for (int r = 0; r < params.in_features; ++r) {
        const double x = series.values[static_cast<std::size_t>(r)];
        double* dst = out.grad.data() + static_cast<std::size_t>(r) * params.qubits;
        for (int c = 0; c < params.qubits; ++c) dst[c] = x * g.features[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < params.qubits; ++c) out.grad[o_b + c] = g.features[static_cast<std::size_t>(c)];
    for (std::size_t k = 0; k < g.theta.size(); ++k) out.grad[o_theta + k] = g.theta[k];
    return out;
}

int TcnConfig::receptive_field() const {
    int rf = 1;
    for (int l = 0; l < levels; ++l) rf += (kernel - 1) * (1 << l);
    return rf;
}

long TcnConfig::param_count() const {
    long n = 0;
    for (int l = 0; l < levels; ++l) {
        const long in = l == 0 ? in_channels : hidden;
        n += static_cast<long>(hidden) * in * kernel + hidden;
    }
    return n + hidden + 1; // readout
}

void TcnConfig::validate() const {
    if (in_channels < 1 || hidden < 1 || kernel < 1 || levels < 1) {
        throw std::invalid_argument("TcnConfig: all dimensions must be >= 1");
    }
}

TcnParams TcnParams::init(const TcnConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    TcnParams p;
    p.cfg = cfg;
    p.flat.assign(static_cast<std::size_t>(cfg.param_count()), 0.0);
    Rng rng = substream(seed, 0x74636eULL);
    for (int l = 0; l < cfg.levels; ++l) {
        const int in = p.level_in_channels(l);
        const double scale = std::sqrt(2.0 / (static_cast<double>(in) * cfg.kernel));
        double* w = p.flat.data() + p.weight_offset(l);
        for (int i = 0; i < cfg.hidden * in * cfg.kernel; ++i) w[i] = scale * rng.normal();
    }
    double* r = p.flat.data() + p.readout_offset();
    const double rscale = 0.1 / std::sqrt(static_cast<double>(cfg.hidden));
    for (int c = 0; c < cfg.hidden; ++c) r[c] = rscale * rng.normal();
    return p;
}

int TcnParams::level_in_channels(int level) const {
    return level == 0 ? cfg.in_channels : cfg.hidden;
}

std::size_t TcnParams::weight_offset(int level) const {
    std::size_t o = 0;
    for (int l = 0; l < level; ++l) {
        o += static_cast<std::size_t>(cfg.hidden) * level_in_channels(l) * cfg.kernel +
             cfg.hidden;
    }
    return o;
}

std::size_t TcnParams::bias_offset(int level) const {
    return weight_offset(level) +
           static_cast<std::size_t>(cfg.hidden) * level_in_channels(level) * cfg.kernel;
}

std::size_t TcnParams::readout_offset() const {
    return weight_offset(cfg.levels);
}

void TcnParams::validate() const {
    cfg.validate();
    if (flat.size() != static_cast<std::size_t>(cfg.param_count())) {
        throw std::invalid_argument("TcnParams: expected " + std::to_string(cfg.param_count()) +
                                    " parameters, have " + std::to_string(flat.size()));
    }
}

namespace {

struct TcnActivations {
    // acts[l] holds the input to level l (acts[0] = series values); size
    // channels(l) x T. pre[l] holds the pre-activation output of level l.
    std::vector<std::vector<double>> acts;
    std::vector<std::vector<double>> pre;
};

void tcn_check(const TimeSeries& series, const TcnParams& params) {
    params.validate();
    series.validate();
    if (series.channels != params.cfg.in_channels) {
        throw std::invalid_argument("tcn: configured for " +
                                    std::to_string(params.cfg.in_channels) +
                                    " channels, series has " + std::to_string(series.channels));
    }
    if (params.cfg.receptive_field() > series.steps) {
        throw ConfigError("tcn: receptive field " + std::to_string(params.cfg.receptive_field()) +
                          " exceeds series length " + std::to_string(series.steps));
    }
}

TcnActivations tcn_run(const TimeSeries& series, const TcnParams& params,
                       std::vector<double>& readout) {
    const TcnConfig& cfg = params.cfg;
    const int T = series.steps;
    TcnActivations a;
    a.acts.resize(static_cast<std::size_t>(cfg.levels) + 1);
    a.pre.resize(static_cast<std::size_t>(cfg.levels));
    a.acts[0] = series.values;

    for (int l = 0; l < cfg.levels; ++l) {
        const int in = params.level_in_channels(l);
        const int dil = 1 << l;
        const double* w = params.flat.data() + params.weight_offset(l);
        const double* b = params.flat.data() + params.bias_offset(l);
        std::vector<double>& z = a.pre[static_cast<std::size_t>(l)];
        z.assign(static_cast<std::size_t>(cfg.hidden) * T, 0.0);
        for (int o = 0; o < cfg.hidden; ++o) {
            for (int i = 0; i < in; ++i) {
                const double* wk = w + (static_cast<std::size_t>(o) * in + i) * cfg.kernel;
                const double* x = a.acts[static_cast<std::size_t>(l)].data() +
                                  static_cast<std::size_t>(i) * T;
                double* zo = z.data() + static_cast<std::size_t>(o) * T;
                for (int j = 0; j < cfg.kernel; ++j) {
                    const int back = dil * (cfg.kernel - 1 - j);
                    const double wj = wk[j];
                    if (wj == 0.0) continue;
                    for (int t = back; t < T; ++t) zo[t] += wj * x[t - back];
                }
            }
            double* zo = z.data() + static_cast<std::size_t>(o) * T;
            for (int t = 0; t < T; ++t) zo[t] += b[o];
        }
        std::vector<double>& out = a.acts[static_cast<std::size_t>(l) + 1];
        out.resize(z.size());
        for (std::size_t k = 0; k < z.size(); ++k) out[k] = z[k] > 0.0 ? z[k] : 0.0;
    }

    const double* wr = params.flat.data() + params.readout_offset();
    const double br = wr[cfg.hidden];
    readout.assign(static_cast<std::size_t>(T), br);
    const std::vector<double>& top = a.acts[static_cast<std::size_t>(cfg.levels)];
    for (int c = 0; c < cfg.hidden; ++c) {
        const double* h = top.data() + static_cast<std::size_t>(c) * T;
        for (int t = 0; t < T; ++t) readout[static_cast<std::size_t>(t)] += wr[c] * h[t];
    }
    return a;
}

} // namespace

std::vector<double> tcn_forward(const TimeSeries& series, const TcnParams& params) {
    tcn_check(series, params);
    std::vector<double> readout;
    tcn_run(series, params, readout);
    return readout;
}

double tcn_score(const TimeSeries& series, const TcnParams& params) {
    const std::vector<double> y = tcn_forward(series, params);
    double s = 0.0;
    for (double v : y) s += v;
    return s / static_cast<double>(y.size());
}

TcnEval tcn_value_grad(const TimeSeries& series, const TcnParams& params,
                       std::span<const double> upstream) {
    tcn_check(series, params);
    const TcnConfig& cfg = params.cfg;
    const int T = series.steps;
    if (upstream.size() != static_cast<std::size_t>(T)) {
        throw std::invalid_argument("tcn: upstream length mismatch");
    }

    TcnEval out;
    TcnActivations a = tcn_run(series, params, out.per_step);
    out.grad.assign(params.flat.size(), 0.0);

    const double* wr = params.flat.data() + params.readout_offset();
    double* g_r = out.grad.data() + params.readout_offset();
    const std::vector<double>& top = a.acts[static_cast<std::size_t>(cfg.levels)];

    std::vector<double> d_act(static_cast<std::size_t>(cfg.hidden) * T, 0.0);
    for (int c = 0; c < cfg.hidden; ++c) {
        const double* h = top.data() + static_cast<std::size_t>(c) * T;
        double* d = d_act.data() + static_cast<std::size_t>(c) * T;
        double acc = 0.0;
        for (int t = 0; t < T; ++t) {
            acc += h[t] * upstream[static_cast<std::size_t>(t)];
            d[t] = wr[c] * upstream[static_cast<std::size_t>(t)];
        }
        g_r[c] = acc;
    }
    double bacc = 0.0;
    for (int t = 0; t < T; ++t) bacc += upstream[static_cast<std::size_t>(t)];
    g_r[cfg.hidden] = bacc;

    for (int l = cfg.levels - 1; l >= 0; --l) {
        const int in = params.level_in_channels(l);
        const int dil = 1 << l;
        const std::vector<double>& z = a.pre[static_cast<std::size_t>(l)];
        const std::vector<double>& x = a.acts[static_cast<std::size_t>(l)];
        const double* w = params.flat.data() + params.weight_offset(l);
        double* g_w = out.grad.data() + params.weight_offset(l);
        double* g_b = out.grad.data() + params.bias_offset(l);

        // ReLU mask folds into the incoming gradient.
        for (int o = 0; o < cfg.hidden; ++o) {
            const double* zo = z.data() + static_cast<std::size_t>(o) * T;
            double* d = d_act.data() + static_cast<std::size_t>(o) * T;
            for (int t = 0; t < T; ++t) {
                if (zo[t] <= 0.0) d[t] = 0.0;
            }
        }

        std::vector<double> d_prev(static_cast<std::size_t>(in) * T, 0.0);
        for (int o = 0; o < cfg.hidden; ++o) {
            const double* d = d_act.data() + static_cast<std::size_t>(o) * T;
            double db = 0.0;
            for (int t = 0; t < T; ++t) db += d[t];
            g_b[o] = db;
            for (int i = 0; i < in; ++i) {
                const double* xi = x.data() + static_cast<std::size_t>(i) * T;
                double* dp = d_prev.data() + static_cast<std::size_t>(i) * T;
                const double* wk = w + (static_cast<std::size_t>(o) * in + i) * cfg.kernel;
                double* gk = g_w + (static_cast<std::size_t>(o) * in + i) * cfg.kernel;
                for (int j = 0; j < cfg.kernel; ++j) {
                    const int back = dil * (cfg.kernel - 1 - j);
                    double gw = 0.0;
                    const double wj = wk[j];
                    for (int t = back; t < T; ++t) {
                        gw += d[t] * xi[t - back];
                        dp[t - back] += wj * d[t];
                    }
                    gk[j] = gw;
                }
            }
        }
        d_act = std::move(d_prev);
    }
    return out;
}

} // namespace hqtcn
