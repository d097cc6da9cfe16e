#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "hqtcn/errors.hpp"
#include "hqtcn/metrics.hpp"
#include "hqtcn/parallel.hpp"
#include "hqtcn/rng.hpp"
#include "hqtcn/run_config.hpp"
#include "hqtcn/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hqtcn;

namespace {

void write_json(const fs::path& path, const json& j) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void write_snapshot(const std::string& out_dir, json snapshot) {
    write_json(fs::path(out_dir) / "resolved_config.json", snapshot);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------- narma-gen

int cmd_narma_gen(int steps, std::uint64_t seed, const std::string& out_dir) {
    const NarmaData data = generate_narma_dataset(steps, seed);
    fs::create_directories(out_dir);

    TimeSeries series;
    series.channels = 2;
    series.steps = steps;
    series.values = data.u;
    series.values.insert(series.values.end(), data.y.begin(), data.y.end());
    write_csv((fs::path(out_dir) / "narma.csv").string(), series);

    json manifest;
    manifest["task"] = "regression";
    manifest["series"] = "narma.csv";
    manifest["steps"] = steps;
    manifest["train_steps"] = data.train_steps;
    manifest["val_steps"] = data.val_steps;
    manifest["test_steps"] = data.test_steps;
    manifest["seed"] = seed;
    write_json(fs::path(out_dir) / "manifest.json", manifest);

    write_snapshot(out_dir,
                   json{{"command", "narma-gen"}, {"steps", steps}, {"seed", seed}, {"out", out_dir}});
    std::cout << "wrote " << out_dir << "/narma.csv (" << steps << " steps; split "
              << data.train_steps << "/" << data.val_steps << "/" << data.test_steps << ")\n";
    return 0;
}

// ---------------------------------------------------------------- synth-gen

int cmd_synth_gen(const SynthConfig& cfg, std::uint64_t seed, const std::string& out_dir) {
    const Dataset ds = synth_classification(cfg, seed);
    fs::create_directories(out_dir);

    json manifest;
    manifest["task"] = "classification";
    manifest["seed"] = seed;
    json items = json::array();
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "subject_%03zu.csv", i);
        write_csv((fs::path(out_dir) / name).string(), ds.items[i]);
        const char* split = ds.item_split[i] == Split::Train
                                ? "train"
                                : (ds.item_split[i] == Split::Val ? "val" : "test");
        items.push_back(json{{"file", name}, {"split", split}});
    }
    manifest["items"] = items;
    write_json(fs::path(out_dir) / "manifest.json", manifest);

    write_snapshot(out_dir, json{{"command", "synth-gen"},
                                 {"subjects", cfg.subjects},
                                 {"channels", cfg.channels},
                                 {"steps", cfg.steps},
                                 {"seed", seed},
                                 {"out", out_dir}});
    std::cout << "wrote " << ds.items.size() << " subjects to " << out_dir << "\n";
    return 0;
}

// -------------------------------------------------------------------- train

void dump_regression_predictions(const fs::path& path, const Dataset& ds,
                                 const TrainedModel& model, const ModelSpec& spec,
                                 std::uint64_t seed, int threads) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "t,truth,prediction,model,seed\n";
    const TimeSeries& s = ds.items.front();
    std::vector<double> pred;
    int t0 = 0;
    if (spec.kind == ModelKind::Hqtcn) {
        pred = hqtcn_forward(s, model.hqtcn, spec.model, threads);
        t0 = spec.model.dilation * (spec.model.kernel - 1);
    } else {
        pred = tcn_forward(s, model.tcn);
    }
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const int t = t0 + static_cast<int>(i);
        double truth = s.target_steps[static_cast<std::size_t>(t)];
        double p = pred[i];
        if (ds.norm.target_scaled) {
            truth = ds.norm.unscale_target(truth);
            p = ds.norm.unscale_target(p);
        }
        out << t << ',' << fmt_double(truth) << ',' << fmt_double(p) << ','
            << to_string(spec.kind) << ',' << seed << "\n";
    }
}

void dump_classification_predictions(const fs::path& path, const Dataset& ds,
                                     const TrainedModel& model, const ModelSpec& spec,
                                     std::uint64_t seed, int threads) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "item,label,score,model,seed\n";
    for (std::size_t i = 0; i < ds.items.size(); ++i) {
        const TimeSeries& item = ds.items[i];
        double score = 0.0;
        switch (spec.kind) {
            case ModelKind::Hqtcn:
                score = aggregate(hqtcn_forward(item, model.hqtcn, spec.model, threads));
                break;
            case ModelKind::QcnnBaseline:
                score = qcnn_baseline_forward(item, model.qcnn);
                break;
            case ModelKind::Tcn:
                score = tcn_score(item, model.tcn);
                break;
        }
        out << i << ',' << item.label << ',' << fmt_double(score) << ',' << to_string(spec.kind)
            << ',' << seed << "\n";
    }
}

int cmd_train(const std::string& config_path, const std::string& model_override,
              std::int64_t seed_override, int threads, const std::string& out_dir) {
    RunSpec spec = parse_run_config(config_path);
    if (!model_override.empty()) {
        spec.model.kind = model_kind_from_string(model_override);
    }
    if (seed_override >= 0) {
        spec.train.seeds = {static_cast<std::uint64_t>(seed_override)};
    }
    spec.train.threads = resolve_threads(threads);
    spec.train.validate();
    spec.model.model.validate();

    fs::create_directories(out_dir);
    json snapshot = run_spec_json(spec);
    snapshot["command"] = "train";
    snapshot["out"] = out_dir;
    write_snapshot(out_dir, snapshot);

    std::ofstream records(fs::path(out_dir) / "runs.jsonl");
    if (!records) throw DataError("cannot write " + out_dir + "/runs.jsonl");

    std::vector<RunRecord> runs;
    for (std::uint64_t seed : spec.train.seeds) {
        const Dataset ds = build_dataset(spec.data, spec.model.model.task, seed);
        TrainedModel model;
        RunRecord rec = train_model(spec.model, ds, spec.train, seed, &model);
        rec.config = snapshot;
        records << rec.to_json().dump() << "\n";
        if (!rec.failed) {
            char name[48];
            std::snprintf(name, sizeof name, "predictions_seed%llu.csv",
                          static_cast<unsigned long long>(seed));
            if (ds.task == Task::Regression) {
                dump_regression_predictions(fs::path(out_dir) / name, ds, model, spec.model, seed,
                                            spec.train.threads);
            } else {
                dump_classification_predictions(fs::path(out_dir) / name, ds, model, spec.model,
                                                seed, spec.train.threads);
            }
        }
        std::cout << "seed " << seed << ": "
                  << (rec.failed ? "FAILED (" + rec.error + ")"
                                 : "test metric " + fmt_double(rec.test_metric))
                  << " [" << rec.epochs_run << " epochs, " << fmt_double(rec.wall_clock_s)
                  << " s]\n";
        runs.push_back(std::move(rec));
    }

    const MultiSeedSummary summary = summarize_runs(runs);
    json sj;
    sj["n_seeds"] = runs.size();
    sj["metric_mean"] = summary.metric_mean;
    sj["metric_std"] = summary.metric_std;
    sj["partial"] = summary.partial;
    write_json(fs::path(out_dir) / "summary.json", sj);
    std::cout << "mean test metric " << fmt_double(summary.metric_mean) << " +- "
              << fmt_double(summary.metric_std) << "\n";
    return summary.partial ? 1 : 0;
}

// --------------------------------------------------------------------- eval

int cmd_eval(const std::string& pred_path, const std::string& out_dir) {
    std::ifstream in(pred_path);
    if (!in) throw DataError("cannot open " + pred_path);
    std::string header;
    if (!std::getline(in, header)) throw DataError(pred_path + ": empty file");

    json metrics;
    std::string line;
    if (header.rfind("t,truth,prediction", 0) == 0) {
        std::vector<double> truth, pred;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream row(line);
            std::string cell;
            std::getline(row, cell, ',');
            std::getline(row, cell, ',');
            truth.push_back(std::stod(cell));
            std::getline(row, cell, ',');
            pred.push_back(std::stod(cell));
        }
        const double m = mse(pred, truth);
        std::cout << "mse " << fmt_double(m) << " over " << pred.size() << " steps\n";
        metrics = {{"metric", "mse"}, {"value", m}, {"count", pred.size()}};
    } else if (header.rfind("item,label,score", 0) == 0) {
        std::vector<double> scores;
        std::vector<int> labels;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream row(line);
            std::string cell;
            std::getline(row, cell, ',');
            std::getline(row, cell, ',');
            labels.push_back(std::stoi(cell));
            std::getline(row, cell, ',');
            scores.push_back(std::stod(cell));
        }
        const double a = auroc(scores, labels);
        std::cout << "auroc " << fmt_double(a) << " over " << scores.size() << " items\n";
        metrics = {{"metric", "auroc"}, {"value", a}, {"count", scores.size()}};
    } else {
        throw DataError(pred_path + ": unrecognized prediction dump header");
    }
    write_json(fs::path(out_dir) / "metrics.json", metrics);
    write_snapshot(out_dir, json{{"command", "eval"}, {"pred", pred_path}, {"out", out_dir}});
    return 0;
}

// ------------------------------------------------------------------- ablate

int cmd_ablate(const std::string& config_path, const std::vector<std::string>& axes,
               const std::string& values_csv, int threads, const std::string& out_dir) {
    if (axes.size() != 1) {
        throw ConfigError("ablate sweeps exactly one axis of {d, L, n}; got " +
                          std::to_string(axes.size()));
    }
    const std::string axis = axes.front();
    if (axis != "d" && axis != "L" && axis != "n") {
        throw ConfigError("unknown ablation axis '" + axis + "' (expected d, L or n)");
    }
    std::vector<int> values;
    {
        std::istringstream in(values_csv);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (!tok.empty()) values.push_back(std::stoi(tok));
        }
    }
    if (values.empty()) throw ConfigError("ablate: empty value list");

    RunSpec base = parse_run_config(config_path);
    base.train.threads = resolve_threads(threads);

    fs::create_directories(out_dir);
    json snapshot = run_spec_json(base);
    snapshot["command"] = "ablate";
    snapshot["axis"] = axis;
    snapshot["values"] = values;
    snapshot["out"] = out_dir;
    write_snapshot(out_dir, snapshot);

    std::ofstream records(fs::path(out_dir) / "runs.jsonl");
    std::ofstream table(fs::path(out_dir) / "ablation.csv");
    table << "axis,value,receptive_field,classical_params,quantum_params,total_params,"
             "metric_mean,metric_std\n";

    int exit_code = 0;
    for (int v : values) {
        RunSpec cell = base;
        if (axis == "d") {
            cell.model.model.dilation = v;
        } else if (axis == "L") {
            cell.model.model.n_layers = v;
        } else {
            cell.model.model.embed_dim = v;
            cell.model.model.qubits = 8; // fixed register; bridge stage when v != 8
        }
        cell.model.model.validate();

        std::vector<RunRecord> runs;
        for (std::uint64_t seed : cell.train.seeds) {
            const Dataset ds = build_dataset(cell.data, cell.model.model.task, seed);
            RunRecord rec = train_model(cell.model, ds, cell.train, seed);
            rec.config = json{{"axis", axis}, {"value", v}, {"seed", seed}};
            records << rec.to_json().dump() << "\n";
            runs.push_back(std::move(rec));
        }
        const MultiSeedSummary summary = summarize_runs(runs);
        if (summary.partial) exit_code = 1;

        const int channels =
            cell.data.source == "narma" ? 1 : cell.data.synth.channels;
        const ParamCount pc = hqtcn_param_count(channels, cell.model.model);
        table << axis << ',' << v << ',' << receptive_field(cell.model.model.kernel, cell.model.model.dilation)
              << ',' << pc.classical << ',' << pc.quantum << ',' << pc.total() << ','
              << fmt_double(summary.metric_mean) << ',' << fmt_double(summary.metric_std) << "\n";
        std::cout << axis << "=" << v << ": metric " << fmt_double(summary.metric_mean) << " +- "
                  << fmt_double(summary.metric_std) << " (params " << pc.total() << ")\n";
    }
    return exit_code;
}

// ---------------------------------------------------------------- gradcheck

struct DeviationStats {
    double max_abs = 0.0;
    double max_rel = 0.0;
    long checked = 0;
    long failures = 0;

    void add(double got, double want) {
        const double abs_dev = std::abs(got - want);
        const double scale = std::max(std::abs(got), std::abs(want));
        max_abs = std::max(max_abs, abs_dev);
        if (scale > 1e-7) max_rel = std::max(max_rel, abs_dev / scale);
        ++checked;
        if (abs_dev > std::max(1e-7, 1e-5 * scale)) ++failures;
    }
};

int cmd_gradcheck(std::uint64_t seed, bool inject_error, const std::string& out_dir) {
    Rng rng = substream(seed, 0x67726164ULL);
    DeviationStats circuit_stats;
    const double fd_h = 1e-4;

    int points = 0;
    for (int layers = 1; layers <= 3; ++layers) {
        const int per_layer = layers == 3 ? 6 : 7; // 20 points total
        for (int rep = 0; rep < per_layer; ++rep, ++points) {
            CircuitParams params(8, layers);
            for (double& t : params.theta) t = rng.uniform(-1.5, 1.5);
            std::vector<double> features(8);
            for (double& f : features) f = rng.uniform(-2.0, 2.0);

            QcnnGradient g = qcnn_gradient(features, params);
            if (inject_error && points == 0) g.theta[5] += 1e-3;

            for (std::size_t i = 0; i < params.theta.size(); ++i) {
                const double orig = params.theta[i];
                params.theta[i] = orig + fd_h;
                const double fp = qcnn_forward(features, params);
                params.theta[i] = orig - fd_h;
                const double fm = qcnn_forward(features, params);
                params.theta[i] = orig;
                circuit_stats.add(g.theta[i], (fp - fm) / (2.0 * fd_h));
            }
            for (std::size_t i = 0; i < features.size(); ++i) {
                const double orig = features[i];
                features[i] = orig + fd_h;
                const double fp = qcnn_forward(features, params);
                features[i] = orig - fd_h;
                const double fm = qcnn_forward(features, params);
                features[i] = orig;
                circuit_stats.add(g.features[i], (fp - fm) / (2.0 * fd_h));
            }
            std::cout << "circuit point " << points + 1 << " (L=" << layers << "): "
                      << 132 * layers + 8 << " coordinates checked\n";
        }
    }

    // end-to-end chain rule on a small instance: C=2, T=8, K=3, d=1, n=4, L=1
    DeviationStats model_stats;
    {
        ModelConfig cfg;
        cfg.kernel = 3;
        cfg.dilation = 1;
        cfg.embed_dim = 4;
        cfg.n_layers = 1;
        TimeSeries s;
        s.channels = 2;
        s.steps = 8;
        s.values.resize(16);
        for (double& v : s.values) v = rng.uniform(-1.0, 1.0);
        std::vector<double> targets(6);
        for (double& y : targets) y = rng.uniform(-0.5, 0.5);
        HqtcnParams params = HqtcnParams::init(cfg, 2, seed);
        for (double& w : params.w_fc) w = 0.3 * rng.normal();
        for (double& b : params.b_fc) b = 0.3 * rng.normal();

        const WindowRange r = full_window_range(s, cfg);
        const auto loss_at = [&](const std::vector<double>& flat) {
            HqtcnParams q = params;
            q.from_flat(flat);
            const std::vector<double> o = hqtcn_forward_range(s, q, cfg, r);
            double loss = 0.0;
            for (std::size_t i = 0; i < o.size(); ++i) {
                loss += (o[i] - targets[i]) * (o[i] - targets[i]);
            }
            return loss / static_cast<double>(o.size());
        };

        const std::vector<double> o = hqtcn_forward_range(s, params, cfg, r);
        std::vector<double> upstream(o.size());
        for (std::size_t i = 0; i < o.size(); ++i) {
            upstream[i] = 2.0 * (o[i] - targets[i]) / static_cast<double>(o.size());
        }
        const std::vector<double> grad = hqtcn_gradient(s, params, cfg, r, upstream);
        std::vector<double> flat = params.to_flat();
        for (std::size_t i = 0; i < flat.size(); ++i) {
            const double orig = flat[i];
            flat[i] = orig + fd_h;
            const double fp = loss_at(flat);
            flat[i] = orig - fd_h;
            const double fm = loss_at(flat);
            flat[i] = orig;
            model_stats.add(grad[i], (fp - fm) / (2.0 * fd_h));
        }
        std::cout << "model chain rule: " << model_stats.checked << " coordinates checked\n";
    }

    const bool pass = circuit_stats.failures == 0 && model_stats.failures == 0;
    std::cout << "circuit: " << circuit_stats.checked << " coordinates over " << points
              << " points, max abs deviation " << fmt_double(circuit_stats.max_abs)
              << ", max relative deviation " << fmt_double(circuit_stats.max_rel) << "\n";
    std::cout << "model:   " << model_stats.checked << " coordinates, max abs deviation "
              << fmt_double(model_stats.max_abs) << ", max relative deviation "
              << fmt_double(model_stats.max_rel) << "\n";
    std::cout << "max relative deviation " << (pass ? "< 1e-5: PASS" : ">= tolerance: FAIL")
              << "\n";

    write_json(fs::path(out_dir) / "gradcheck.json",
               json{{"pass", pass},
                    {"circuit_coords", circuit_stats.checked},
                    {"circuit_max_abs", circuit_stats.max_abs},
                    {"circuit_max_rel", circuit_stats.max_rel},
                    {"model_coords", model_stats.checked},
                    {"model_max_abs", model_stats.max_abs},
                    {"model_max_rel", model_stats.max_rel}});
    write_snapshot(out_dir, json{{"command", "gradcheck"}, {"seed", seed}, {"out", out_dir}});
    return pass ? 0 : 1;
}

// --------------------------------------------------------------- paramcount

int cmd_paramcount(const std::string& model, const std::vector<long>& dims,
                   const TcnConfig& tcn_cfg, const std::string& out_dir) {
    ParamCount pc;
    json detail;
    if (model == "hqtcn") {
        if (dims.size() != 4) throw ConfigError("paramcount hqtcn expects: C K n L");
        pc = model_param_count(static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                               static_cast<int>(dims[2]), static_cast<int>(dims[3]));
        std::cout << "model hqtcn C=" << dims[0] << " K=" << dims[1] << " n=" << dims[2]
                  << " L=" << dims[3] << "\n";
    } else if (model == "qcnn") {
        if (dims.size() != 4) throw ConfigError("paramcount qcnn expects: C T n L");
        pc = qcnn_baseline_param_count(static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                                       static_cast<int>(dims[2]), static_cast<int>(dims[3]));
        std::cout << "model qcnn C=" << dims[0] << " T=" << dims[1] << " n=" << dims[2]
                  << " L=" << dims[3] << "\n";
    } else if (model == "tcn") {
        if (dims.size() != 1) throw ConfigError("paramcount tcn expects: C");
        TcnConfig cfg = tcn_cfg;
        cfg.in_channels = static_cast<int>(dims[0]);
        pc.classical = cfg.param_count();
        pc.quantum = 0;
        std::cout << "model tcn C=" << dims[0] << " hidden=" << cfg.hidden
                  << " kernel=" << cfg.kernel << " levels=" << cfg.levels << "\n";
    } else {
        throw ConfigError("unknown model '" + model + "' (expected hqtcn, qcnn or tcn)");
    }
    std::cout << "classical " << pc.classical << "\n";
    std::cout << "quantum " << pc.quantum << "\n";
    std::cout << "total " << pc.total() << "\n";
    write_snapshot(out_dir,
                   json{{"command", "paramcount"}, {"model", model}, {"dims", dims}, {"out", out_dir}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid quantum temporal convolution toolkit"};
    app.require_subcommand(1);

    std::string out_dir = "out";
    int threads = 0;

    // narma-gen
    auto* narma = app.add_subcommand("narma-gen", "generate the sequence benchmark data");
    int narma_steps = 240;
    std::uint64_t narma_seed = 1;
    narma->add_option("--steps", narma_steps, "sequence length");
    narma->add_option("--seed", narma_seed, "generator seed");
    narma->add_option("--out", out_dir, "output directory");

    // synth-gen
    auto* synth = app.add_subcommand("synth-gen", "generate the synthetic classification set");
    SynthConfig synth_cfg;
    std::uint64_t synth_seed = 1;
    synth->add_option("--subjects", synth_cfg.subjects, "total subject count");
    synth->add_option("--channels", synth_cfg.channels, "channels per subject");
    synth->add_option("--steps", synth_cfg.steps, "time steps per subject");
    synth->add_option("--train-subjects", synth_cfg.n_train, "explicit train split size");
    synth->add_option("--val-subjects", synth_cfg.n_val, "explicit val split size");
    synth->add_option("--test-subjects", synth_cfg.n_test, "explicit test split size");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", out_dir, "output directory");

    // train
    auto* train = app.add_subcommand("train", "train a model and write run records");
    std::string train_config;
    std::string train_model_name;
    std::int64_t train_seed = -1;
    train->add_option("--config", train_config, "run configuration file")->required();
    train->add_option("--model", train_model_name, "hqtcn | qcnn | tcn (overrides config)");
    train->add_option("--seed", train_seed, "single-seed override");
    train->add_option("--threads", threads, "worker threads (0 = all cores)");
    train->add_option("--out", out_dir, "output directory");

    // eval
    auto* eval = app.add_subcommand("eval", "recompute metrics from a prediction dump");
    std::string pred_path;
    eval->add_option("--pred", pred_path, "prediction CSV from train")->required();
    eval->add_option("--out", out_dir, "output directory");

    // ablate
    auto* ablate = app.add_subcommand("ablate", "sweep one hyperparameter axis");
    std::string ablate_config;
    std::vector<std::string> ablate_axes;
    std::string ablate_values;
    ablate->add_option("--config", ablate_config, "baseline configuration file")->required();
    ablate->add_option("--axis", ablate_axes, "swept axis: d, L or n")->required();
    ablate->add_option("--values", ablate_values, "comma-separated grid values")->required();
    ablate->add_option("--threads", threads, "worker threads (0 = all cores)");
    ablate->add_option("--out", out_dir, "output directory");

    // gradcheck
    auto* gradcheck = app.add_subcommand("gradcheck", "verify gradients against finite differences");
    std::uint64_t grad_seed = 1;
    bool inject = false;
    gradcheck->add_option("--seed", grad_seed, "randomization seed");
    gradcheck->add_flag("--inject-error", inject, "corrupt one gradient entry (self-test)")
        ->group(""); // hidden
    gradcheck->add_option("--out", out_dir, "output directory");

    // paramcount
    auto* paramcount = app.add_subcommand("paramcount", "print parameter-count breakdowns");
    std::string pc_model;
    std::vector<long> pc_dims;
    TcnConfig pc_tcn;
    paramcount->add_option("model", pc_model, "hqtcn | qcnn | tcn")->required();
    paramcount->add_option("dims", pc_dims, "hqtcn: C K n L; qcnn: C T n L; tcn: C");
    paramcount->add_option("--tcn-hidden", pc_tcn.hidden, "tcn hidden channels");
    paramcount->add_option("--tcn-levels", pc_tcn.levels, "tcn levels");
    paramcount->add_option("--tcn-kernel", pc_tcn.kernel, "tcn kernel");
    paramcount->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (narma->parsed()) return cmd_narma_gen(narma_steps, narma_seed, out_dir);
        if (synth->parsed()) return cmd_synth_gen(synth_cfg, synth_seed, out_dir);
        if (train->parsed()) {
            return cmd_train(train_config, train_model_name, train_seed, threads, out_dir);
        }
        if (eval->parsed()) return cmd_eval(pred_path, out_dir);
        if (ablate->parsed()) {
            return cmd_ablate(ablate_config, ablate_axes, ablate_values, threads, out_dir);
        }
        if (gradcheck->parsed()) return cmd_gradcheck(grad_seed, inject, out_dir);
        if (paramcount->parsed()) return cmd_paramcount(pc_model, pc_dims, pc_tcn, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
