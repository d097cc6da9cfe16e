#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hqtcn/baselines.hpp"
#include "hqtcn/data.hpp"
#include "hqtcn/model.hpp"

namespace hqtcn {

enum class ModelKind { Hqtcn, QcnnBaseline, Tcn };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct TrainConfig {
    double lr = 0.005;
    double weight_decay = 1e-4;
    int epochs = 300;
    int patience = 30;
    int batch_size = 8;      // sequences per step (classification)
    double init_scale = 1.0; // circuit-angle init range, radians
    std::vector<std::uint64_t> seeds{1, 2, 3};
    int threads = 1;

    void validate() const;
};

struct ModelSpec {
    ModelKind kind = ModelKind::Hqtcn;
    ModelConfig model;
    TcnConfig tcn;
};

struct DataSpec {
    std::string source = "narma"; // narma | synth | csv
    int narma_steps = 240;
    SynthConfig synth;
    std::string csv_path; // directory containing manifest.json
};

// Builds (or loads) and normalizes the dataset for one run. Generated
// sources derive everything from `seed`; CSV sources ignore it.
Dataset build_dataset(const DataSpec& spec, Task task, std::uint64_t seed);

struct RunRecord {
    std::uint64_t seed = 0;
    nlohmann::json config;
    std::vector<double> train_curve;
    std::vector<double> val_curve;
    // Regression: MSE on [0,1]-scaled targets; classification: test AUROC.
    double test_metric = 0.0;
    // Regression only: MSE after undoing the target scaling.
    double test_metric_raw = 0.0;
    long classical_params = 0;
    long quantum_params = 0;
    long total_params = 0;
    double wall_clock_s = 0.0;
    int epochs_run = 0;
    int best_epoch = -1;
    bool failed = false;
    std::string error;

    nlohmann::json to_json() const;
};

// Final weights of a finished run, for prediction dumps.
struct TrainedModel {
    ModelKind kind = ModelKind::Hqtcn;
    HqtcnParams hqtcn;
    QcnnBaselineParams qcnn;
    TcnParams tcn;
};

// Full-batch epochs for regression, mini-batches of `batch_size` sequences
// for classification. Keeps the best-validation weights and restores them
// before the test evaluation; stops after `patience` epochs without
// improvement. Deterministic given (seed, config); thread count only changes
// the schedule, never the numbers.
RunRecord train_model(const ModelSpec& spec, const Dataset& dataset, const TrainConfig& train,
                      std::uint64_t seed, TrainedModel* out_model = nullptr);

struct MultiSeedSummary {
    std::vector<RunRecord> runs;
    double metric_mean = 0.0;
    double metric_std = 0.0; // sample standard deviation
    bool partial = false;    // true when any seed failed
};

MultiSeedSummary summarize_runs(const std::vector<RunRecord>& runs);

// Per-seed pipeline: build dataset, train, record. Requires >= 2 seeds.
MultiSeedSummary multi_seed(const ModelSpec& spec, const DataSpec& data, const TrainConfig& train);

} // namespace hqtcn
