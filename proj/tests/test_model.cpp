#include <doctest.h>

#include <cmath>

#include "circuit_oracle.hpp"
#include "hqtcn/errors.hpp"
#include "hqtcn/model.hpp"
#include "hqtcn/rng.hpp"
#include "oracles.hpp"

using namespace hqtcn;

namespace {

TimeSeries random_series(int channels, int steps, Rng& rng) {
    TimeSeries s;
    s.channels = channels;
    s.steps = steps;
    s.values.resize(static_cast<std::size_t>(channels) * steps);
    for (double& v : s.values) v = rng.uniform(-1.0, 1.0);
    return s;
}

ModelConfig tiny_config() {
    ModelConfig cfg;
    cfg.kernel = 3;
    cfg.dilation = 1;
    cfg.embed_dim = 4;
    cfg.n_layers = 1;
    cfg.task = Task::Regression;
    return cfg;
}

HqtcnParams random_params(const ModelConfig& cfg, int channels, Rng& rng) {
    HqtcnParams p = HqtcnParams::init(cfg, channels, rng.next_u64());
    for (double& w : p.w_fc) w = 0.3 * rng.normal();
    for (double& b : p.b_fc) b = 0.3 * rng.normal();
    for (double& t : p.circuit.theta) t = rng.uniform(-1.5, 1.5);
    return p;
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("window indices follow the dilated-sampling definition") {
    CHECK(window_indices(10, 3, 2) == std::vector<int>{6, 8, 10});
    CHECK(window_indices(4, 5, 1) == std::vector<int>{0, 1, 2, 3, 4});

    const std::vector<int> w = window_indices(33, 12, 3);
    CHECK(w.front() == 0);
    CHECK(w.back() == 33);
    CHECK(w.back() - w.front() + 1 == 34);

    CHECK_THROWS_AS(window_indices(3, 3, 2), std::invalid_argument);
}

TEST_CASE("window indices match a brute-force enumerator") {
    for (int kernel = 1; kernel <= 16; ++kernel) {
        for (int dilation = 1; dilation <= 8; ++dilation) {
            const int lead = dilation * (kernel - 1);
            for (int t = lead; t < lead + 20; ++t) {
                const std::vector<int> got = window_indices(t, kernel, dilation);
                // enumerate every index of the form t - j*d within reach
                std::vector<int> want;
                for (int j = kernel - 1; j >= 0; --j) want.push_back(t - j * dilation);
                CHECK(got == want);
                CHECK(static_cast<int>(got.size()) == kernel);
                for (std::size_t i = 1; i < got.size(); ++i) {
                    CHECK(got[i] - got[i - 1] == dilation);
                }
            }
        }
    }
}

TEST_CASE("receptive field arithmetic") {
    CHECK(receptive_field(12, 3) == 34);
    CHECK(receptive_field(12, 1) == 12);
    CHECK(receptive_field(12, 2) == 23);
    CHECK(receptive_field(12, 4) == 45);
    CHECK(receptive_field(1, 7) == 1);
}

TEST_CASE("windows are flattened channel-major") {
    TimeSeries s;
    s.channels = 1;
    s.steps = 5;
    s.values = {0, 1, 2, 3, 4};
    auto w = extract_windows(s, 3, 1);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == std::vector<double>{0, 1, 2});
    CHECK(w[1] == std::vector<double>{1, 2, 3});
    CHECK(w[2] == std::vector<double>{2, 3, 4});

    TimeSeries m;
    m.channels = 2;
    m.steps = 2;
    m.values = {1, 2, 3, 4}; // channel 0 = [1,2], channel 1 = [3,4]
    auto wm = extract_windows(m, 2, 1);
    REQUIRE(wm.size() == 1);
    CHECK(wm[0] == std::vector<double>{1, 2, 3, 4});

    Rng rng(3);
    const TimeSeries r = random_series(3, 40, rng);
    CHECK(extract_windows(r, 5, 3).size() == 40 - 3 * 4);

    TimeSeries tiny = random_series(1, 4, rng);
    CHECK_THROWS_WITH_AS(extract_windows(tiny, 3, 2), doctest::Contains("at least 5"), DataError);
}

TEST_CASE("linear embedding is affine") {
    ModelConfig cfg = tiny_config();
    HqtcnParams p = HqtcnParams::init(cfg, 2, 1);
    std::vector<double> w(6, 0.5);

    // zero weights and bias map everything to zero
    CHECK(linear_embed(w, p) == std::vector<double>(4, 0.0));

    // zero weights, bias v -> v
    p.b_fc = {0.1, -0.2, 0.3, -0.4};
    CHECK(linear_embed(w, p) == p.b_fc);

    // random case against an index-by-index evaluation
    Rng rng(17);
    HqtcnParams q = random_params(cfg, 2, rng);
    std::vector<double> win(6);
    for (double& x : win) x = rng.uniform(-2.0, 2.0);
    const std::vector<double> got = linear_embed(win, q);
    for (int j = 0; j < 4; ++j) {
        double want = q.b_fc[static_cast<std::size_t>(j)];
        for (int i = 0; i < 6; ++i) {
            want += win[static_cast<std::size_t>(i)] * q.w_fc[static_cast<std::size_t>(i) * 4 + j];
        }
        CHECK(got[static_cast<std::size_t>(j)] == doctest::Approx(want).epsilon(1e-12));
    }

    CHECK_THROWS_AS(linear_embed(std::vector<double>(5, 0.0), q), std::invalid_argument);
}

TEST_CASE("forward with zero parameters emits +1 everywhere") {
    Rng rng(23);
    ModelConfig cfg = tiny_config();
    const TimeSeries s = random_series(2, 12, rng);
    HqtcnParams p = HqtcnParams::init(cfg, 2, 5, /*init_scale=*/0.0);
    const std::vector<double> o = hqtcn_forward(s, p, cfg);
    CHECK(o.size() == 10);
    for (double v : o) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(aggregate(o) == doctest::Approx(1.0).epsilon(1e-12));

    const ModelPrediction pred = model_output(s, p, cfg);
    CHECK(pred.score == doctest::Approx(1.0));
    CHECK(pred.per_step.size() == 10);
}

TEST_CASE("every window output stays in [-1, 1]") {
    Rng rng(29);
    ModelConfig cfg = tiny_config();
    const TimeSeries s = random_series(2, 20, rng);
    const HqtcnParams p = random_params(cfg, 2, rng);
    for (double v : hqtcn_forward(s, p, cfg)) {
        CHECK(std::abs(v) <= 1.0 + 1e-12);
    }
}

TEST_CASE("a circuit-parameter nudge reaches every window through sharing") {
    Rng rng(31);
    ModelConfig cfg = tiny_config();
    const TimeSeries s = random_series(2, 16, rng);
    HqtcnParams p = random_params(cfg, 2, rng);
    const std::vector<double> before = hqtcn_forward(s, p, cfg);
    p.circuit.theta[7] += 0.3;
    const std::vector<double> after = hqtcn_forward(s, p, cfg);
    int changed = 0;
    for (std::size_t i = 0; i < before.size(); ++i) {
        if (std::abs(after[i] - before[i]) > 1e-8) ++changed;
    }
    CHECK(changed > 0);
}

TEST_CASE("parallel evaluation reproduces the sequential reference exactly") {
    Rng rng(37);
    ModelConfig cfg = tiny_config();
    const TimeSeries s = random_series(2, 40, rng);
    const HqtcnParams p = random_params(cfg, 2, rng);
    const std::vector<double> seq = hqtcn_forward(s, p, cfg, 1);
    const std::vector<double> par = hqtcn_forward(s, p, cfg, 4);
    REQUIRE(seq.size() == par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) CHECK(seq[i] == par[i]);

    // gradient path: ordered accumulation is schedule-independent
    std::vector<double> upstream(seq.size());
    for (double& u : upstream) u = rng.uniform(-1.0, 1.0);
    const WindowRange r = full_window_range(s, cfg);
    const std::vector<double> g1 = hqtcn_gradient(s, p, cfg, r, upstream, 1);
    const std::vector<double> g4 = hqtcn_gradient(s, p, cfg, r, upstream, 4);
    REQUIRE(g1.size() == g4.size());
    for (std::size_t i = 0; i < g1.size(); ++i) CHECK(g1[i] == g4[i]);
}

TEST_CASE("aggregate is the arithmetic mean") {
    CHECK(aggregate(std::vector<double>{0.2, 0.4, 0.6}) == doctest::Approx(0.4));
    CHECK(aggregate(std::vector<double>(7, 0.123)) == doctest::Approx(0.123));
    CHECK_THROWS_AS(aggregate(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("parameter accounting reproduces the published counts") {
    const ParamCount narma = model_param_count(1, 5, 8, 2);
    CHECK(narma.classical == 48);
    CHECK(narma.quantum == 264);
    CHECK(narma.total() == 312);

    const ParamCount eeg = model_param_count(64, 12, 8, 2);
    CHECK(eeg.classical == 6152);
    CHECK(eeg.quantum == 264);
    CHECK(eeg.total() == 6416);

    CHECK(model_param_count(64, 12, 4, 2).total() == 3380);
    CHECK(model_param_count(64, 12, 16, 2).total() == 12704);
}

TEST_CASE("constructed parameter vectors match the declared counts") {
    // primary configuration: embedding width equals the register width
    ModelConfig cfg;
    cfg.kernel = 5;
    cfg.dilation = 2;
    cfg.embed_dim = 8;
    cfg.n_layers = 2;
    const HqtcnParams p = HqtcnParams::init(cfg, 1, 7);
    CHECK(p.total_count() == (1 * 5 + 1) * 8 + 132 * 2);
    CHECK(static_cast<long>(p.total_count()) == hqtcn_param_count(1, cfg).total());

    // bridged configuration used by the embedding-width sweep
    ModelConfig wide;
    wide.kernel = 12;
    wide.dilation = 3;
    wide.embed_dim = 16;
    wide.n_layers = 2;
    wide.qubits = 8;
    const HqtcnParams q = HqtcnParams::init(wide, 64, 7);
    CHECK(static_cast<long>(q.total_count()) == hqtcn_param_count(64, wide).total());
    CHECK(hqtcn_param_count(64, wide).total() == 12704);
}

TEST_CASE("flat round trip preserves parameters") {
    Rng rng(41);
    ModelConfig cfg = tiny_config();
    const HqtcnParams p = random_params(cfg, 2, rng);
    HqtcnParams q = HqtcnParams::init(cfg, 2, 99);
    q.from_flat(p.to_flat());
    CHECK(q.w_fc == p.w_fc);
    CHECK(q.b_fc == p.b_fc);
    CHECK(q.circuit.theta == p.circuit.theta);
}

TEST_CASE("zero upstream gives a zero gradient") {
    Rng rng(43);
    ModelConfig cfg = tiny_config();
    const TimeSeries s = random_series(2, 10, rng);
    const HqtcnParams p = random_params(cfg, 2, rng);
    const WindowRange r = full_window_range(s, cfg);
    const std::vector<double> upstream(static_cast<std::size_t>(r.end_t - r.begin_t), 0.0);
    for (double g : hqtcn_gradient(s, p, cfg, r, upstream)) CHECK(g == 0.0);
}

TEST_CASE("single-window gradient equals the hand-composed chain rule") {
    Rng rng(47);
    ModelConfig cfg = tiny_config();
    const TimeSeries s = random_series(2, 3, rng); // exactly one window
    const HqtcnParams p = random_params(cfg, 2, rng);
    const WindowRange r = full_window_range(s, cfg);
    REQUIRE(r.end_t - r.begin_t == 1);
    const std::vector<double> upstream{1.0};
    const std::vector<double> grad = hqtcn_gradient(s, p, cfg, r, upstream);

    const std::vector<double> win = extract_windows(s, cfg.kernel, cfg.dilation)[0];
    const std::vector<double> e = linear_embed(win, p);
    const QcnnGradient qg = qcnn_gradient(e, p.circuit);

    std::size_t o = 0;
    for (int i = 0; i < p.in_features; ++i) {
        for (int j = 0; j < p.embed_dim; ++j) {
            CHECK(grad[o++] ==
                  doctest::Approx(win[static_cast<std::size_t>(i)] *
                                  qg.features[static_cast<std::size_t>(j)]).epsilon(1e-12));
        }
    }
    for (int j = 0; j < p.embed_dim; ++j) {
        CHECK(grad[o++] == doctest::Approx(qg.features[static_cast<std::size_t>(j)]).epsilon(1e-12));
    }
    for (std::size_t k = 0; k < qg.theta.size(); ++k) {
        CHECK(grad[o++] == doctest::Approx(qg.theta[k]).epsilon(1e-12));
    }
    CHECK(o == grad.size());
}

TEST_CASE("full-model gradient matches finite differences on the tiny instance") {
    Rng rng(53);
    ModelConfig cfg = tiny_config(); // C=2, T=8, K=3, d=1, n=4, L=1
    const TimeSeries s = random_series(2, 8, rng);
    std::vector<double> targets(6);
    for (double& y : targets) y = rng.uniform(-0.5, 0.5);
    HqtcnParams p = random_params(cfg, 2, rng);
    const WindowRange r = full_window_range(s, cfg);

    const auto loss_at = [&](std::span<const double> flat) {
        HqtcnParams q = p;
        q.from_flat(flat);
        const std::vector<double> o = hqtcn_forward_range(s, q, cfg, r);
        double loss = 0.0;
        for (std::size_t i = 0; i < o.size(); ++i) {
            loss += (o[i] - targets[i]) * (o[i] - targets[i]);
        }
        return loss / static_cast<double>(o.size());
    };

    const std::vector<double> o = hqtcn_forward_range(s, p, cfg, r);
    std::vector<double> upstream(o.size());
    for (std::size_t i = 0; i < o.size(); ++i) {
        upstream[i] = 2.0 * (o[i] - targets[i]) / static_cast<double>(o.size());
    }
    const std::vector<double> grad = hqtcn_gradient(s, p, cfg, r, upstream);
    const std::vector<double> flat = p.to_flat();
    const std::vector<double> fd = oracle::finite_diff(loss_at, flat);
    REQUIRE(grad.size() == fd.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const double tol = std::max(1e-7, 1e-5 * std::max(std::abs(grad[i]), std::abs(fd[i])));
        CHECK(std::abs(grad[i] - fd[i]) <= tol);
    }
}

TEST_CASE("bridged embedding gradient also matches finite differences") {
    Rng rng(59);
    ModelConfig cfg;
    cfg.kernel = 3;
    cfg.dilation = 1;
    cfg.embed_dim = 6;
    cfg.n_layers = 1;
    cfg.qubits = 4;
    const TimeSeries s = random_series(2, 6, rng);
    HqtcnParams p = HqtcnParams::init(cfg, 2, rng.next_u64());
    for (double& w : p.w_fc) w = 0.3 * rng.normal();
    for (double& b : p.b_fc) b = 0.3 * rng.normal();
    for (double& t : p.circuit.theta) t = rng.uniform(-1.5, 1.5);
    const WindowRange r = full_window_range(s, cfg);
    std::vector<double> upstream(static_cast<std::size_t>(r.end_t - r.begin_t));
    for (double& u : upstream) u = rng.uniform(-1.0, 1.0);

    const auto value_at = [&](std::span<const double> flat) {
        HqtcnParams q = p;
        q.from_flat(flat);
        const std::vector<double> o = hqtcn_forward_range(s, q, cfg, r);
        double v = 0.0;
        for (std::size_t i = 0; i < o.size(); ++i) v += upstream[i] * o[i];
        return v;
    };

    const std::vector<double> grad = hqtcn_gradient(s, p, cfg, r, upstream);
    const std::vector<double> fd = oracle::finite_diff(value_at, p.to_flat());
    REQUIRE(grad.size() == fd.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const double tol = std::max(1e-7, 1e-5 * std::max(std::abs(grad[i]), std::abs(fd[i])));
        CHECK(std::abs(grad[i] - fd[i]) <= tol);
    }
}

} // TEST_SUITE
