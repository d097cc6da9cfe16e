#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hqtcn/model.hpp"

namespace hqtcn {

enum class Split { Train, Val, Test };

struct NormStats {
    std::vector<double> ch_mean;
    std::vector<double> ch_scale;
    double target_lo = 0.0;
    double target_hi = 1.0;
    bool target_scaled = false;
    std::vector<std::string> warnings;

    double scale_target(double y) const { return (y - target_lo) / (target_hi - target_lo); }
    double unscale_target(double y) const { return y * (target_hi - target_lo) + target_lo; }
};

struct Dataset {
    Task task = Task::Regression;
    std::vector<TimeSeries> items;
    std::vector<Split> item_split; // per item; classification splits are subject-wise
    // Regression split sizes (chronological, single series).
    int train_steps = 0;
    int val_steps = 0;
    int test_steps = 0;
    NormStats norm;
    bool normalized = false;
};

// Tenth-order nonlinear autoregressive moving-average recurrence. The first
// 10 outputs are fixed at zero; y_t for t >= 10 follows
// y_t = 0.3 y_{t-1} + 0.05 y_{t-1} sum_{i=0..9} y_{t-i-1}
//       + 1.5 u_{t-10} u_{t-1} + 0.1.
std::vector<double> narma10(std::span<const double> u);

struct NarmaData {
    std::vector<double> u;
    std::vector<double> y;
    int train_steps = 0;
    int val_steps = 0;
    int test_steps = 0;
};

// Seeded drive u ~ Uniform[0, 0.5), y via narma10, chronological 70/15/15
// split. Rare divergent draws are rejected and redrawn deterministically.
NarmaData generate_narma_dataset(int steps, std::uint64_t seed);

Dataset narma_dataset(int steps, std::uint64_t seed);

// CSV layout: rows are channels, columns are time steps. An optional first
// line `# channels=C steps=T label=<0|1>` pins the shape and, for
// classification series, the label. See the README for the exact format.
TimeSeries load_csv(const std::string& path);
void write_csv(const std::string& path, const TimeSeries& series, bool with_header = true);

struct SynthConfig {
    int subjects = 58;
    int channels = 64;
    int steps = 249;
    // -1 derives the 70/15/15 split (floor train, floor val, remainder test).
    int n_train = -1;
    int n_val = -1;
    int n_test = -1;

    // Class signature: a fixed random channel subset carries band-limited
    // sinusoids whose amplitude, phase and offset depend on the label.
    int signal_channels = 8;
    double amp_class0 = 0.6;
    double amp_class1 = 1.4;
    double dc_shift = 0.5;
    double phase_shift = 0.7;
    double noise_sigma = 0.5;
    double band_lo_hz = 8.0;
    double band_hi_hz = 12.0;
    double sample_rate_hz = 80.0;
};

// Balanced two-class subject set (labels alternate), subject-wise split.
Dataset synth_classification(const SynthConfig& cfg, std::uint64_t seed);

// In-place standardization. Channel stats come from the train split only;
// regression targets are min-max scaled to [0,1] from train extrema.
// Zero-variance channels keep scale 1 and add a warning.
NormStats normalize(Dataset& ds);

} // namespace hqtcn
