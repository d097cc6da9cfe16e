#include "hqtcn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numeric>

#include "hqtcn/errors.hpp"
#include "hqtcn/metrics.hpp"
#include "hqtcn/optimizer.hpp"
#include "hqtcn/rng.hpp"

namespace hqtcn {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::Hqtcn: return "hqtcn";
        case ModelKind::QcnnBaseline: return "qcnn";
        case ModelKind::Tcn: return "tcn";
    }
    return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "hqtcn") return ModelKind::Hqtcn;
    if (name == "qcnn") return ModelKind::QcnnBaseline;
    if (name == "tcn") return ModelKind::Tcn;
    throw ConfigError("unknown model kind '" + name + "' (expected hqtcn, qcnn or tcn)");
}

void TrainConfig::validate() const {
    if (lr <= 0.0) throw ConfigError("train: learning rate must be > 0");
    if (weight_decay < 0.0) throw ConfigError("train: weight decay must be >= 0");
    if (epochs < 0) throw ConfigError("train: epochs must be >= 0");
    if (patience < 1) throw ConfigError("train: patience must be >= 1");
    if (batch_size < 1) throw ConfigError("train: batch size must be >= 1");
    if (seeds.empty()) throw ConfigError("train: seed list is empty");
    if (init_scale < 0.0) throw ConfigError("train: init scale must be >= 0");
}

namespace {

Dataset load_csv_dataset(const std::string& dir) {
    const fs::path root(dir);
    const fs::path manifest_path = fs::is_directory(root) ? root / "manifest.json" : root;
    std::ifstream in(manifest_path);
    if (!in) throw DataError("cannot open manifest " + manifest_path.string());
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception& e) {
        throw DataError(manifest_path.string() + ": invalid JSON (" + e.what() + ")");
    }
    const fs::path base = manifest_path.parent_path();

    Dataset ds;
    const std::string task = manifest.value("task", "");
    if (task == "regression") {
        ds.task = Task::Regression;
        const std::string file = manifest.at("series").get<std::string>();
        TimeSeries raw = load_csv((base / file).string());
        if (raw.channels != 2) {
            throw DataError(file + ": regression series expects 2 channels (drive, target)");
        }
        TimeSeries series;
        series.channels = 1;
        series.steps = raw.steps;
        series.values.assign(raw.values.begin(), raw.values.begin() + raw.steps);
        series.target_steps.assign(raw.values.begin() + raw.steps, raw.values.end());
        ds.items.push_back(std::move(series));
        ds.item_split.push_back(Split::Train);
        ds.train_steps = manifest.at("train_steps").get<int>();
        ds.val_steps = manifest.at("val_steps").get<int>();
        ds.test_steps = manifest.at("test_steps").get<int>();
        if (ds.train_steps + ds.val_steps + ds.test_steps != raw.steps) {
            throw DataError(manifest_path.string() + ": split sizes do not cover the series");
        }
    } else if (task == "classification") {
        ds.task = Task::Classification;
        for (const json& item : manifest.at("items")) {
            const std::string file = item.at("file").get<std::string>();
            TimeSeries series = load_csv((base / file).string());
            if (series.label < 0) throw DataError(file + ": missing label header");
            const std::string split = item.at("split").get<std::string>();
            ds.items.push_back(std::move(series));
            if (split == "train") {
                ds.item_split.push_back(Split::Train);
            } else if (split == "val") {
                ds.item_split.push_back(Split::Val);
            } else if (split == "test") {
                ds.item_split.push_back(Split::Test);
            } else {
                throw DataError(manifest_path.string() + ": unknown split '" + split + "'");
            }
        }
        if (ds.items.empty()) throw DataError(manifest_path.string() + ": no items");
    } else {
        throw DataError(manifest_path.string() + ": unknown task '" + task + "'");
    }
    return ds;
}

} // namespace

Dataset build_dataset(const DataSpec& spec, Task task, std::uint64_t seed) {
    Dataset ds;
    if (spec.source == "narma") {
        ds = narma_dataset(spec.narma_steps, seed);
    } else if (spec.source == "synth") {
        ds = synth_classification(spec.synth, seed);
    } else if (spec.source == "csv") {
        ds = load_csv_dataset(spec.csv_path);
    } else {
        throw ConfigError("unknown data source '" + spec.source +
                          "' (expected narma, synth or csv)");
    }
    if (ds.task != task) {
        throw ConfigError("data source provides a " +
                          std::string(ds.task == Task::Regression ? "regression" : "classification") +
                          " task but the model is configured for the other");
    }
    normalize(ds);
    return ds;
}

namespace {

struct SplitIds {
    std::vector<int> train, val, test;
};

SplitIds split_ids(const Dataset& ds) {
    SplitIds ids;
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        switch (ds.item_split[i]) {
            case Split::Train: ids.train.push_back(static_cast<int>(i)); break;
            case Split::Val: ids.val.push_back(static_cast<int>(i)); break;
            case Split::Test: ids.test.push_back(static_cast<int>(i)); break;
        }
    }
    return ids;
}

double label_target(const TimeSeries& item) { return item.label == 1 ? 1.0 : -1.0; }

// Per-model-kind training mechanics behind the shared epoch loop.
class TrainerBase {
public:
    virtual ~TrainerBase() = default;
    virtual std::vector<double> flat_params() const = 0;
    virtual void set_flat_params(std::span<const double> flat) = 0;
    // One optimizer pass over the train split; returns the epoch train loss.
    virtual double epoch_update(AdamState& state, const AdamConfig& adam, Rng& batch_rng) = 0;
    virtual double val_loss() = 0;
    virtual double test_metric(double* raw) = 0;
    virtual ParamCount param_count() const = 0;
};

class HqtcnTrainer : public TrainerBase {
public:
    HqtcnTrainer(const Dataset& ds, const ModelConfig& cfg, const TrainConfig& train,
                 std::uint64_t seed)
        : ds_(ds), cfg_(cfg), threads_(train.threads), batch_size_(train.batch_size),
          params_(HqtcnParams::init(cfg, ds.items.front().channels, seed, train.init_scale)),
          ids_(split_ids(ds)) {
        if (ds_.task == Task::Regression) {
            const int lead = cfg_.dilation * (cfg_.kernel - 1);
            const TimeSeries& s = ds_.items.front();
            if (lead >= ds_.train_steps) {
                throw ConfigError("train split of " + std::to_string(ds_.train_steps) +
                                  " steps is shorter than the first full window at t=" +
                                  std::to_string(lead));
            }
            train_range_ = {lead, ds_.train_steps};
            val_range_ = {ds_.train_steps, ds_.train_steps + ds_.val_steps};
            test_range_ = {ds_.train_steps + ds_.val_steps, s.steps};
        }
    }

    std::vector<double> flat_params() const override { return params_.to_flat(); }
    void set_flat_params(std::span<const double> flat) override { params_.from_flat(flat); }
    ParamCount param_count() const override {
        return hqtcn_param_count(ds_.items.front().channels, cfg_);
    }

    double epoch_update(AdamState& state, const AdamConfig& adam, Rng& batch_rng) override {
        if (ds_.task == Task::Regression) return regression_step(state, adam);
        return classification_epoch(state, adam, batch_rng);
    }

    double val_loss() override {
        // When a dataset carries no validation split, early stopping tracks
        // the train split instead.
        if (ds_.task == Task::Regression) {
            return range_mse(ds_.val_steps > 0 ? val_range_ : train_range_);
        }
        return score_loss(ids_.val.empty() ? ids_.train : ids_.val);
    }

    double test_metric(double* raw) override {
        if (ds_.task == Task::Regression) {
            if (raw != nullptr) *raw = range_mse_raw(test_range_);
            return range_mse(test_range_);
        }
        if (raw != nullptr) *raw = 0.0;
        return split_auroc(ids_.test);
    }

    const HqtcnParams& params() const { return params_; }

private:
    std::vector<double> targets(WindowRange r) const {
        const TimeSeries& s = ds_.items.front();
        return {s.target_steps.begin() + r.begin_t, s.target_steps.begin() + r.end_t};
    }

    double regression_step(AdamState& state, const AdamConfig& adam) {
        const TimeSeries& s = ds_.items.front();
        const std::vector<double> o = hqtcn_forward_range(s, params_, cfg_, train_range_, threads_);
        const std::vector<double> y = targets(train_range_);
        const int n = static_cast<int>(o.size());
        std::vector<double> upstream(o.size());
        double loss = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = o[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
            loss += d * d;
            upstream[static_cast<std::size_t>(i)] = 2.0 * d / n;
        }
        loss /= n;
        const std::vector<double> grad =
            hqtcn_gradient(s, params_, cfg_, train_range_, upstream, threads_);
        std::vector<double> flat = params_.to_flat();
        adam_step(flat, grad, state, adam);
        params_.from_flat(flat);
        return loss;
    }

    double classification_epoch(AdamState& state, const AdamConfig& adam, Rng& batch_rng) {
        std::vector<int> order = ids_.train;
        batch_rng.shuffle(order);
        double loss_sum = 0.0;
        int batches = 0;
        for (std::size_t pos = 0; pos < order.size(); pos += static_cast<std::size_t>(batch_size_)) {
            const std::size_t end = std::min(order.size(), pos + static_cast<std::size_t>(batch_size_));
            const int bn = static_cast<int>(end - pos);
            std::vector<double> grad(params_.total_count(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t k = pos; k < end; ++k) {
                const TimeSeries& item = ds_.items[static_cast<std::size_t>(order[k])];
                const WindowRange r = full_window_range(item, cfg_);
                const std::vector<double> o = hqtcn_forward_range(item, params_, cfg_, r, threads_);
                const double score = aggregate(o);
                const double y = label_target(item);
                batch_loss += (score - y) * (score - y);
                const double up = 2.0 * (score - y) / (static_cast<double>(o.size()) * bn);
                std::vector<double> upstream(o.size(), up);
                const std::vector<double> g =
                    hqtcn_gradient(item, params_, cfg_, r, upstream, threads_);
                for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += g[j];
            }
            batch_loss /= bn;
            std::vector<double> flat = params_.to_flat();
            adam_step(flat, grad, state, adam);
            params_.from_flat(flat);
            loss_sum += batch_loss;
            ++batches;
        }
        return batches > 0 ? loss_sum / batches : 0.0;
    }

    double range_mse(WindowRange r) {
        const TimeSeries& s = ds_.items.front();
        const std::vector<double> o = hqtcn_forward_range(s, params_, cfg_, r, threads_);
        const std::vector<double> y = targets(r);
        return mse(o, y);
    }

    double range_mse_raw(WindowRange r) {
        const TimeSeries& s = ds_.items.front();
        std::vector<double> o = hqtcn_forward_range(s, params_, cfg_, r, threads_);
        std::vector<double> y = targets(r);
        if (ds_.norm.target_scaled) {
            for (double& v : o) v = ds_.norm.unscale_target(v);
            for (double& v : y) v = ds_.norm.unscale_target(v);
        }
        return mse(o, y);
    }

    double score_loss(const std::vector<int>& ids) {
        double loss = 0.0;
        for (int id : ids) {
            const TimeSeries& item = ds_.items[static_cast<std::size_t>(id)];
            const double score =
                aggregate(hqtcn_forward(item, params_, cfg_, threads_));
            const double d = score - label_target(item);
            loss += d * d;
        }
        return ids.empty() ? 0.0 : loss / static_cast<double>(ids.size());
    }

    double split_auroc(const std::vector<int>& ids) {
        std::vector<double> scores;
        std::vector<int> labels;
        for (int id : ids) {
            const TimeSeries& item = ds_.items[static_cast<std::size_t>(id)];
            scores.push_back(aggregate(hqtcn_forward(item, params_, cfg_, threads_)));
            labels.push_back(item.label);
        }
        return auroc(scores, labels);
    }

    const Dataset& ds_;
    ModelConfig cfg_;
    int threads_;
    int batch_size_;
    HqtcnParams params_;
    SplitIds ids_;
    WindowRange train_range_{}, val_range_{}, test_range_{};
};

class QcnnBaselineTrainer : public TrainerBase {
public:
    QcnnBaselineTrainer(const Dataset& ds, const ModelConfig& cfg, const TrainConfig& train,
                        std::uint64_t seed)
        : ds_(ds), batch_size_(train.batch_size), ids_(split_ids(ds)) {
        if (ds_.task != Task::Classification) {
            throw ConfigError("the windowless circuit baseline supports classification only");
        }
        const TimeSeries& first = ds_.items.front();
        params_ = QcnnBaselineParams::init(first.channels, first.steps, cfg.circuit_qubits(),
                                           cfg.n_layers, seed, train.init_scale);
    }

    std::vector<double> flat_params() const override { return params_.to_flat(); }
    void set_flat_params(std::span<const double> flat) override { params_.from_flat(flat); }
    ParamCount param_count() const override {
        const TimeSeries& first = ds_.items.front();
        return qcnn_baseline_param_count(first.channels, first.steps, params_.qubits,
                                         params_.circuit.n_layers);
    }

    double epoch_update(AdamState& state, const AdamConfig& adam, Rng& batch_rng) override {
        std::vector<int> order = ids_.train;
        batch_rng.shuffle(order);
        double loss_sum = 0.0;
        int batches = 0;
        for (std::size_t pos = 0; pos < order.size(); pos += static_cast<std::size_t>(batch_size_)) {
            const std::size_t end = std::min(order.size(), pos + static_cast<std::size_t>(batch_size_));
            const int bn = static_cast<int>(end - pos);
            std::vector<double> grad(params_.total_count(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t k = pos; k < end; ++k) {
                const TimeSeries& item = ds_.items[static_cast<std::size_t>(order[k])];
                const QcnnBaselineEval eval = qcnn_baseline_value_grad(item, params_);
                const double y = label_target(item);
                const double d = eval.value - y;
                batch_loss += d * d;
                const double up = 2.0 * d / bn;
                for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += up * eval.grad[j];
            }
            batch_loss /= bn;
            std::vector<double> flat = params_.to_flat();
            adam_step(flat, grad, state, adam);
            params_.from_flat(flat);
            loss_sum += batch_loss;
            ++batches;
        }
        return batches > 0 ? loss_sum / batches : 0.0;
    }

    double val_loss() override {
        const std::vector<int>& ids = ids_.val.empty() ? ids_.train : ids_.val;
        double loss = 0.0;
        for (int id : ids) {
            const TimeSeries& item = ds_.items[static_cast<std::size_t>(id)];
            const double d = qcnn_baseline_forward(item, params_) - label_target(item);
            loss += d * d;
        }
        return loss / static_cast<double>(ids.size());
    }

    double test_metric(double* raw) override {
        if (raw != nullptr) *raw = 0.0;
        std::vector<double> scores;
        std::vector<int> labels;
        for (int id : ids_.test) {
            const TimeSeries& item = ds_.items[static_cast<std::size_t>(id)];
            scores.push_back(qcnn_baseline_forward(item, params_));
            labels.push_back(item.label);
        }
        return auroc(scores, labels);
    }

    const QcnnBaselineParams& params() const { return params_; }

private:
    const Dataset& ds_;
    int batch_size_;
    QcnnBaselineParams params_;
    SplitIds ids_;
};

class TcnTrainer : public TrainerBase {
public:
    TcnTrainer(const Dataset& ds, const TcnConfig& cfg, const TrainConfig& train,
               std::uint64_t seed)
        : ds_(ds), batch_size_(train.batch_size), ids_(split_ids(ds)) {
        TcnConfig resolved = cfg;
        resolved.in_channels = ds.items.front().channels;
        resolved.task = ds.task;
        params_ = TcnParams::init(resolved, seed);
        if (ds_.task == Task::Regression) {
            if (params_.cfg.receptive_field() > ds_.train_steps) {
                throw ConfigError("tcn receptive field exceeds the train split");
            }
        }
    }

    std::vector<double> flat_params() const override { return params_.flat; }
    void set_flat_params(std::span<const double> flat) override {
        params_.flat.assign(flat.begin(), flat.end());
    }
    ParamCount param_count() const override {
        return {params_.cfg.param_count(), 0};
    }

    double epoch_update(AdamState& state, const AdamConfig& adam, Rng& batch_rng) override {
        if (ds_.task == Task::Regression) return regression_step(state, adam);
        return classification_epoch(state, adam, batch_rng);
    }

    double val_loss() override {
        if (ds_.task == Task::Regression) {
            if (ds_.val_steps > 0) {
                return region_mse(ds_.train_steps, ds_.train_steps + ds_.val_steps);
            }
            return region_mse(0, ds_.train_steps);
        }
        const std::vector<int>& ids = ids_.val.empty() ? ids_.train : ids_.val;
        double loss = 0.0;
        for (int id : ids) {
            const TimeSeries& item = ds_.items[static_cast<std::size_t>(id)];
            const double d = tcn_score(item, params_) - label_target(item);
            loss += d * d;
        }
        return loss / static_cast<double>(ids.size());
    }

    double test_metric(double* raw) override {
        if (ds_.task == Task::Regression) {
            const TimeSeries& s = ds_.items.front();
            const int lo = ds_.train_steps + ds_.val_steps;
            if (raw != nullptr) {
                std::vector<double> o = tcn_forward(s, params_);
                std::vector<double> pred(o.begin() + lo, o.end());
                std::vector<double> y(s.target_steps.begin() + lo, s.target_steps.end());
                if (ds_.norm.target_scaled) {
                    for (double& v : pred) v = ds_.norm.unscale_target(v);
                    for (double& v : y) v = ds_.norm.unscale_target(v);
                }
                *raw = mse(pred, y);
            }
            return region_mse(lo, s.steps);
        }
        if (raw != nullptr) *raw = 0.0;
        std::vector<double> scores;
        std::vector<int> labels;
        for (int id : ids_.test) {
            const TimeSeries& item = ds_.items[static_cast<std::size_t>(id)];
            scores.push_back(tcn_score(item, params_));
            labels.push_back(item.label);
        }
        return auroc(scores, labels);
    }

    const TcnParams& params() const { return params_; }

private:
    double region_mse(int lo, int hi) {
        const TimeSeries& s = ds_.items.front();
        const std::vector<double> o = tcn_forward(s, params_);
        std::vector<double> pred(o.begin() + lo, o.begin() + hi);
        std::vector<double> y(s.target_steps.begin() + lo, s.target_steps.begin() + hi);
        return mse(pred, y);
    }

    double regression_step(AdamState& state, const AdamConfig& adam) {
        const TimeSeries& s = ds_.items.front();
        const std::vector<double> o = tcn_forward(s, params_);
        const int n = ds_.train_steps;
        std::vector<double> upstream(o.size(), 0.0);
        double loss = 0.0;
        for (int t = 0; t < n; ++t) {
            const double d = o[static_cast<std::size_t>(t)] - s.target_steps[static_cast<std::size_t>(t)];
            loss += d * d;
            upstream[static_cast<std::size_t>(t)] = 2.0 * d / n;
        }
        loss /= n;
        const TcnEval eval = tcn_value_grad(s, params_, upstream);
        std::vector<double> flat = params_.flat;
        adam_step(flat, eval.grad, state, adam);
        params_.flat = flat;
        return loss;
    }

    double classification_epoch(AdamState& state, const AdamConfig& adam, Rng& batch_rng) {
        std::vector<int> order = ids_.train;
        batch_rng.shuffle(order);
        double loss_sum = 0.0;
        int batches = 0;
        for (std::size_t pos = 0; pos < order.size(); pos += static_cast<std::size_t>(batch_size_)) {
            const std::size_t end = std::min(order.size(), pos + static_cast<std::size_t>(batch_size_));
            const int bn = static_cast<int>(end - pos);
            std::vector<double> grad(params_.flat.size(), 0.0);
            double batch_loss = 0.0;
            for (std::size_t k = pos; k < end; ++k) {
                const TimeSeries& item = ds_.items[static_cast<std::size_t>(order[k])];
                const int T = item.steps;
                const double score = tcn_score(item, params_);
                const double y = label_target(item);
                batch_loss += (score - y) * (score - y);
                const double up = 2.0 * (score - y) / (static_cast<double>(T) * bn);
                std::vector<double> upstream(static_cast<std::size_t>(T), up);
                const TcnEval eval = tcn_value_grad(item, params_, upstream);
                for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += eval.grad[j];
            }
            batch_loss /= bn;
            std::vector<double> flat = params_.flat;
            adam_step(flat, grad, state, adam);
            params_.flat = flat;
            loss_sum += batch_loss;
            ++batches;
        }
        return batches > 0 ? loss_sum / batches : 0.0;
    }

    const Dataset& ds_;
    int batch_size_;
    TcnParams params_;
    SplitIds ids_;
};

std::unique_ptr<TrainerBase> make_trainer(const ModelSpec& spec, const Dataset& ds,
                                          const TrainConfig& train, std::uint64_t seed) {
    switch (spec.kind) {
        case ModelKind::Hqtcn:
            return std::make_unique<HqtcnTrainer>(ds, spec.model, train, seed);
        case ModelKind::QcnnBaseline:
            return std::make_unique<QcnnBaselineTrainer>(ds, spec.model, train, seed);
        case ModelKind::Tcn:
        default:
            return std::make_unique<TcnTrainer>(ds, spec.tcn, train, seed);
    }
}

} // namespace

nlohmann::json RunRecord::to_json() const {
    json j;
    j["seed"] = seed;
    j["config"] = config;
    j["train_curve"] = train_curve;
    j["val_curve"] = val_curve;
    j["test_metric"] = test_metric;
    j["test_metric_raw"] = test_metric_raw;
    j["param_count"] = total_params;
    j["classical_params"] = classical_params;
    j["quantum_params"] = quantum_params;
    j["epochs_run"] = epochs_run;
    j["best_epoch"] = best_epoch;
    j["wall_clock_s"] = wall_clock_s;
    j["failed"] = failed;
    if (failed) j["error"] = error;
    return j;
}

RunRecord train_model(const ModelSpec& spec, const Dataset& dataset, const TrainConfig& train,
                      std::uint64_t seed, TrainedModel* out_model) {
    train.validate();
    if (!dataset.normalized) {
        throw std::invalid_argument("train_model: dataset must be normalized first");
    }
    const auto t0 = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.seed = seed;
    try {
        std::unique_ptr<TrainerBase> trainer = make_trainer(spec, dataset, train, seed);
        const ParamCount pc = trainer->param_count();
        rec.classical_params = pc.classical;
        rec.quantum_params = pc.quantum;
        rec.total_params = pc.total();

        AdamConfig adam;
        adam.lr = train.lr;
        adam.weight_decay = train.weight_decay;
        AdamState state(trainer->flat_params().size());
        Rng batch_rng = substream(seed, 0x6261746368ULL);

        std::vector<double> best = trainer->flat_params();
        double best_val = trainer->val_loss();
        int since_best = 0;
        for (int epoch = 0; epoch < train.epochs; ++epoch) {
            const double train_loss = trainer->epoch_update(state, adam, batch_rng);
            const double val = trainer->val_loss();
            if (!std::isfinite(train_loss) || !std::isfinite(val)) {
                throw TrainingError("non-finite loss at epoch " + std::to_string(epoch));
            }
            rec.train_curve.push_back(train_loss);
            rec.val_curve.push_back(val);
            rec.epochs_run = epoch + 1;
            if (val < best_val) {
                best_val = val;
                best = trainer->flat_params();
                rec.best_epoch = epoch;
                since_best = 0;
            } else if (++since_best >= train.patience) {
                break;
            }
        }
        trainer->set_flat_params(best);
        double raw = 0.0;
        rec.test_metric = trainer->test_metric(&raw);
        rec.test_metric_raw = raw;

        if (out_model != nullptr) {
            out_model->kind = spec.kind;
            switch (spec.kind) {
                case ModelKind::Hqtcn:
                    out_model->hqtcn = static_cast<HqtcnTrainer*>(trainer.get())->params();
                    break;
                case ModelKind::QcnnBaseline:
                    out_model->qcnn = static_cast<QcnnBaselineTrainer*>(trainer.get())->params();
                    break;
                case ModelKind::Tcn:
                    out_model->tcn = static_cast<TcnTrainer*>(trainer.get())->params();
                    break;
            }
        }
    } catch (const TrainingError& e) {
        rec.failed = true;
        rec.error = e.what();
    }
    rec.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

MultiSeedSummary summarize_runs(const std::vector<RunRecord>& runs) {
    MultiSeedSummary s;
    s.runs = runs;
    double sum = 0.0;
    int n = 0;
    for (const RunRecord& r : runs) {
        if (r.failed) {
            s.partial = true;
            continue;
        }
        sum += r.test_metric;
        ++n;
    }
    if (n > 0) s.metric_mean = sum / n;
    if (n > 1) {
        double sq = 0.0;
        for (const RunRecord& r : runs) {
            if (r.failed) continue;
            sq += (r.test_metric - s.metric_mean) * (r.test_metric - s.metric_mean);
        }
        s.metric_std = std::sqrt(sq / (n - 1));
    }
    return s;
}

MultiSeedSummary multi_seed(const ModelSpec& spec, const DataSpec& data,
                            const TrainConfig& train) {
    train.validate();
    if (train.seeds.size() < 2) {
        throw std::invalid_argument("multi_seed: need at least 2 seeds");
    }
    std::vector<RunRecord> runs;
    for (std::uint64_t seed : train.seeds) {
        const Dataset ds = build_dataset(data, spec.model.task, seed);
        runs.push_back(train_model(spec, ds, train, seed));
    }
    return summarize_runs(runs);
}

} // namespace hqtcn
