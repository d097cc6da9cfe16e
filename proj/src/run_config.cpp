#include "hqtcn/run_config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>

#include "hqtcn/errors.hpp"

namespace hqtcn {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

long parse_long(const std::string& key, const std::string& value) {
    long v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
    }
    return v;
}

double parse_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
    }
    return v;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& key, const std::string& value) {
    std::vector<std::uint64_t> seeds;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        if (comma == std::string::npos) comma = value.size();
        const std::string tok = trim(value.substr(start, comma - start));
        if (!tok.empty()) {
            std::uint64_t v = 0;
            const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
                throw ConfigError("key '" + key + "': bad seed '" + tok + "'");
            }
            seeds.push_back(v);
        }
        start = comma + 1;
    }
    if (seeds.empty()) throw ConfigError("key '" + key + "': empty seed list");
    return seeds;
}

Task parse_task(const std::string& value) {
    if (value == "regression") return Task::Regression;
    if (value == "classification") return Task::Classification;
    throw ConfigError("key 'task': expected regression or classification, got '" + value + "'");
}

} // namespace

RunSpec parse_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);

    RunSpec spec;
    bool kind_tcn = false;

    using Handler = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, std::map<std::string, Handler>> schema{
        {"data",
         {
             {"source", [&](const std::string&, const std::string& v) { spec.data.source = v; }},
             {"steps", [&](const std::string& k, const std::string& v) { spec.data.narma_steps = static_cast<int>(parse_long(k, v)); }},
             {"subjects", [&](const std::string& k, const std::string& v) { spec.data.synth.subjects = static_cast<int>(parse_long(k, v)); }},
             {"channels", [&](const std::string& k, const std::string& v) { spec.data.synth.channels = static_cast<int>(parse_long(k, v)); }},
             {"synth_steps", [&](const std::string& k, const std::string& v) { spec.data.synth.steps = static_cast<int>(parse_long(k, v)); }},
             {"train_subjects", [&](const std::string& k, const std::string& v) { spec.data.synth.n_train = static_cast<int>(parse_long(k, v)); }},
             {"val_subjects", [&](const std::string& k, const std::string& v) { spec.data.synth.n_val = static_cast<int>(parse_long(k, v)); }},
             {"test_subjects", [&](const std::string& k, const std::string& v) { spec.data.synth.n_test = static_cast<int>(parse_long(k, v)); }},
             {"path", [&](const std::string&, const std::string& v) { spec.data.csv_path = v; }},
         }},
        {"model",
         {
             {"kind",
              [&](const std::string&, const std::string& v) {
                  spec.model.kind = model_kind_from_string(v);
                  kind_tcn = spec.model.kind == ModelKind::Tcn;
              }},
             {"kernel", [&](const std::string& k, const std::string& v) { spec.model.model.kernel = static_cast<int>(parse_long(k, v)); }},
             {"dilation", [&](const std::string& k, const std::string& v) { spec.model.model.dilation = static_cast<int>(parse_long(k, v)); }},
             {"embed_dim", [&](const std::string& k, const std::string& v) { spec.model.model.embed_dim = static_cast<int>(parse_long(k, v)); }},
             {"qubits", [&](const std::string& k, const std::string& v) { spec.model.model.qubits = static_cast<int>(parse_long(k, v)); }},
             {"layers", [&](const std::string& k, const std::string& v) { spec.model.model.n_layers = static_cast<int>(parse_long(k, v)); }},
             {"task",
              [&](const std::string&, const std::string& v) {
                  spec.model.model.task = parse_task(v);
                  spec.model.tcn.task = spec.model.model.task;
              }},
             {"tcn_hidden", [&](const std::string& k, const std::string& v) { spec.model.tcn.hidden = static_cast<int>(parse_long(k, v)); }},
             {"tcn_levels", [&](const std::string& k, const std::string& v) { spec.model.tcn.levels = static_cast<int>(parse_long(k, v)); }},
             {"tcn_kernel", [&](const std::string& k, const std::string& v) { spec.model.tcn.kernel = static_cast<int>(parse_long(k, v)); }},
         }},
        {"train",
         {
             {"lr", [&](const std::string& k, const std::string& v) { spec.train.lr = parse_double(k, v); }},
             {"weight_decay", [&](const std::string& k, const std::string& v) { spec.train.weight_decay = parse_double(k, v); }},
             {"epochs", [&](const std::string& k, const std::string& v) { spec.train.epochs = static_cast<int>(parse_long(k, v)); }},
             {"patience", [&](const std::string& k, const std::string& v) { spec.train.patience = static_cast<int>(parse_long(k, v)); }},
             {"batch_size", [&](const std::string& k, const std::string& v) { spec.train.batch_size = static_cast<int>(parse_long(k, v)); }},
             {"init_scale", [&](const std::string& k, const std::string& v) { spec.train.init_scale = parse_double(k, v); }},
             {"seeds", [&](const std::string& k, const std::string& v) { spec.train.seeds = parse_seed_list(k, v); }},
         }},
    };

    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']') {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed section");
            }
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (schema.find(section) == schema.end()) {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown section [" +
                                  section + "]");
            }
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        if (section.empty()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": key outside any section");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const auto& keys = schema.at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key +
                              "' in section [" + section + "]");
        }
        it->second(key, value);
    }

    if (kind_tcn) spec.model.tcn.task = spec.model.model.task;
    return spec;
}

nlohmann::json run_spec_json(const RunSpec& spec) {
    json j;
    j["data"] = {{"source", spec.data.source},
                 {"steps", spec.data.narma_steps},
                 {"subjects", spec.data.synth.subjects},
                 {"channels", spec.data.synth.channels},
                 {"synth_steps", spec.data.synth.steps},
                 {"train_subjects", spec.data.synth.n_train},
                 {"val_subjects", spec.data.synth.n_val},
                 {"test_subjects", spec.data.synth.n_test},
                 {"path", spec.data.csv_path}};
    j["model"] = {{"kind", to_string(spec.model.kind)},
                  {"kernel", spec.model.model.kernel},
                  {"dilation", spec.model.model.dilation},
                  {"embed_dim", spec.model.model.embed_dim},
                  {"qubits", spec.model.model.circuit_qubits()},
                  {"layers", spec.model.model.n_layers},
                  {"task", spec.model.model.task == Task::Regression ? "regression"
                                                                     : "classification"},
                  {"tcn_hidden", spec.model.tcn.hidden},
                  {"tcn_levels", spec.model.tcn.levels},
                  {"tcn_kernel", spec.model.tcn.kernel}};
    j["train"] = {{"lr", spec.train.lr},
                  {"weight_decay", spec.train.weight_decay},
                  {"epochs", spec.train.epochs},
                  {"patience", spec.train.patience},
                  {"batch_size", spec.train.batch_size},
                  {"init_scale", spec.train.init_scale},
                  {"seeds", spec.train.seeds},
                  {"threads", spec.train.threads}};
    return j;
}

} // namespace hqtcn
