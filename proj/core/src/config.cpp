#include "rebal/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace rebal {

namespace {

using nlohmann::json;

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }
std::string index(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void only_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ValidationError(join(path, key), "unknown field");
        }
    }
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ValidationError(path, "expected an object");
    return j;
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ValidationError(path, "expected a string");
    return j.get<std::string>();
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ValidationError(path, "expected a number");
    return j.get<double>();
}

std::uint64_t get_unsigned(const json& j, const std::string& path) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
        throw ValidationError(path, "expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) throw ValidationError(path, "expected true or false");
    return j.get<bool>();
}

Schema parse_schema(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw ValidationError(path, "expected a non-empty array of columns");
    Schema schema;
    std::set<std::string> names;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = index(path, i);
        const auto& col = require_object(j[i], p);
        only_keys(col, p, {"name", "kind"});
        if (!col.contains("name")) throw ValidationError(join(p, "name"), "required");
        if (!col.contains("kind")) throw ValidationError(join(p, "kind"), "required");
        ColumnSchema c;
        c.name = get_string(col["name"], join(p, "name"));
        if (c.name.empty()) throw ValidationError(join(p, "name"), "must be non-empty");
        if (!names.insert(c.name).second) throw ValidationError(join(p, "name"), "duplicate column '" + c.name + "'");
        const auto kind = parse_column_kind(get_string(col["kind"], join(p, "kind")));
        if (!kind) throw ValidationError(join(p, "kind"), "expected numeric, categorical or binary-target");
        c.kind = *kind;
        schema.push_back(std::move(c));
    }
    return schema;
}

ResampleConfig parse_resampler(const json& j, const std::string& path, ResampleConfig base) {
    require_object(j, path);
    only_keys(j, path, {"strategy", "k", "amount", "seed", "smote_mode"});
    ResampleConfig r = base;
    if (j.contains("strategy")) {
        const auto s = parse_resample_strategy(get_string(j["strategy"], join(path, "strategy")));
        if (!s) {
            throw ValidationError(join(path, "strategy"), "unknown strategy '" + j["strategy"].get<std::string>() +
                                                              "'; allowed: " + std::string(resample_strategy_names()));
        }
        r.strategy = *s;
    }
    if (j.contains("k")) {
        r.k = get_unsigned(j["k"], join(path, "k"));
        if (r.k == 0) throw ValidationError(join(path, "k"), "must be at least 1");
    }
    if (j.contains("amount")) {
        if (j["amount"].is_null()) {
            r.amount.reset();
        } else {
            r.amount = get_unsigned(j["amount"], join(path, "amount"));
        }
    }
    if (j.contains("seed")) r.seed = get_unsigned(j["seed"], join(path, "seed"));
    if (j.contains("smote_mode")) {
        const auto m = parse_smote_mode(get_string(j["smote_mode"], join(path, "smote_mode")));
        if (!m) throw ValidationError(join(path, "smote_mode"), "expected canonical or paper_literal");
        r.smote_mode = *m;
    }
    return r;
}

ModelEntry parse_model(const json& j, const std::string& path) {
    require_object(j, path);
    only_keys(j, path,
              {"name", "family", "learning_rate", "iterations", "tolerance", "l2", "max_depth", "min_samples_leaf",
               "n_trees", "bootstrap", "max_features", "rounds", "seed", "threshold", "resampler"});
    if (!j.contains("family")) throw ValidationError(join(path, "family"), "required");
    const auto family = parse_model_family(get_string(j["family"], join(path, "family")));
    if (!family) throw ValidationError(join(path, "family"), "expected one of lr, dt, rf, xgb");

    ModelEntry entry;
    ModelConfig& m = entry.model;
    m = ModelConfig::defaults_for(*family);
    std::string upper(to_string(*family));
    for (auto& ch : upper) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    m.name = j.contains("name") ? get_string(j["name"], join(path, "name")) : upper;
    if (m.name.empty()) throw ValidationError(join(path, "name"), "must be non-empty");

    if (j.contains("learning_rate")) {
        m.learning_rate = get_number(j["learning_rate"], join(path, "learning_rate"));
        const bool ok = *family == ModelFamily::GradientBoosting ? m.learning_rate >= 0.0 : m.learning_rate > 0.0;
        if (!ok) throw ValidationError(join(path, "learning_rate"), "out of range");
    }
    if (j.contains("iterations")) m.iterations = get_unsigned(j["iterations"], join(path, "iterations"));
    if (j.contains("tolerance")) {
        m.tolerance = get_number(j["tolerance"], join(path, "tolerance"));
        if (m.tolerance < 0.0) throw ValidationError(join(path, "tolerance"), "must be nonnegative");
    }
    if (j.contains("l2")) {
        m.l2 = get_number(j["l2"], join(path, "l2"));
        if (m.l2 < 0.0) throw ValidationError(join(path, "l2"), "must be nonnegative");
    }
    if (j.contains("max_depth")) {
        if (j["max_depth"].is_null()) {
            m.max_depth.reset();
        } else {
            m.max_depth = get_unsigned(j["max_depth"], join(path, "max_depth"));
        }
    }
    if (j.contains("min_samples_leaf")) {
        m.min_samples_leaf = get_unsigned(j["min_samples_leaf"], join(path, "min_samples_leaf"));
        if (m.min_samples_leaf == 0) throw ValidationError(join(path, "min_samples_leaf"), "must be at least 1");
    }
    if (j.contains("n_trees")) {
        m.n_trees = get_unsigned(j["n_trees"], join(path, "n_trees"));
        if (m.n_trees == 0) throw ValidationError(join(path, "n_trees"), "must be at least 1");
    }
    if (j.contains("bootstrap")) m.bootstrap = get_bool(j["bootstrap"], join(path, "bootstrap"));
    if (j.contains("max_features")) {
        if (j["max_features"].is_null()) {
            m.max_features.reset();
        } else {
            m.max_features = get_unsigned(j["max_features"], join(path, "max_features"));
            if (*m.max_features == 0) throw ValidationError(join(path, "max_features"), "must be at least 1");
        }
    }
    if (j.contains("rounds")) m.rounds = get_unsigned(j["rounds"], join(path, "rounds"));
    if (j.contains("seed")) m.seed = get_unsigned(j["seed"], join(path, "seed"));
    if (j.contains("threshold")) {
        m.threshold = get_number(j["threshold"], join(path, "threshold"));
        if (!(m.threshold > 0.0 && m.threshold < 1.0)) throw ValidationError(join(path, "threshold"), "must lie in (0, 1)");
    }
    return entry;
}

} // namespace

std::vector<ReportFormat> parse_formats(std::string_view comma_list) {
    std::vector<ReportFormat> out;
    std::string item;
    std::istringstream in{std::string(comma_list)};
    while (std::getline(in, item, ',')) {
        if (item == "json") {
            out.push_back(ReportFormat::Json);
        } else if (item == "txt") {
            out.push_back(ReportFormat::Text);
        } else {
            throw ValidationError("formats", "unknown format '" + item + "'; allowed: json, txt");
        }
    }
    return out;
}

ExperimentConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    require_object(root, "$");
    only_keys(root, "", {"dataset", "schema", "target", "split", "encoders", "resampler", "models", "output",
                         "formats", "threads"});

    ExperimentConfig cfg;
    if (!root.contains("dataset")) throw ValidationError("dataset", "required");
    cfg.dataset = get_string(root["dataset"], "dataset");
    if (!root.contains("schema")) throw ValidationError("schema", "required");
    cfg.schema = parse_schema(root["schema"], "schema");
    if (!root.contains("target")) throw ValidationError("target", "required");
    cfg.target = get_string(root["target"], "target");

    const auto target_it =
        std::find_if(cfg.schema.begin(), cfg.schema.end(), [&](const auto& c) { return c.name == cfg.target; });
    if (target_it == cfg.schema.end()) throw ValidationError("target", "column '" + cfg.target + "' is not in the schema");
    if (target_it->kind != ColumnKind::BinaryTarget) throw ValidationError("target", "column kind must be binary-target");
    if (std::count_if(cfg.schema.begin(), cfg.schema.end(),
                      [](const auto& c) { return c.kind == ColumnKind::BinaryTarget; }) != 1) {
        throw ValidationError("schema", "exactly one column must be binary-target");
    }

    if (root.contains("split")) {
        const auto& s = require_object(root["split"], "split");
        only_keys(s, "split", {"test_fraction", "seed", "stratified"});
        if (s.contains("test_fraction")) {
            cfg.split.test_fraction = get_number(s["test_fraction"], "split.test_fraction");
            if (!(cfg.split.test_fraction >= 0.0 && cfg.split.test_fraction <= 1.0)) {
                throw ValidationError("split.test_fraction", "must lie in [0, 1]");
            }
        }
        if (s.contains("seed")) cfg.split.seed = get_unsigned(s["seed"], "split.seed");
        if (s.contains("stratified")) cfg.split.stratified = get_bool(s["stratified"], "split.stratified");
    }

    if (root.contains("encoders")) {
        const auto& arr = root["encoders"];
        if (!arr.is_array()) throw ValidationError("encoders", "expected an array");
        std::set<std::string> seen;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = index("encoders", i);
            const auto& e = require_object(arr[i], p);
            only_keys(e, p, {"column", "method", "min_count", "mapping", "strict"});
            if (!e.contains("column")) throw ValidationError(join(p, "column"), "required");
            ColumnEncoderSpec spec;
            spec.column = get_string(e["column"], join(p, "column"));
            const auto col = std::find_if(cfg.schema.begin(), cfg.schema.end(),
                                          [&](const auto& c) { return c.name == spec.column; });
            if (col == cfg.schema.end()) throw ValidationError(join(p, "column"), "unknown column '" + spec.column + "'");
            if (col->kind != ColumnKind::Categorical) throw ValidationError(join(p, "column"), "column is not categorical");
            if (!seen.insert(spec.column).second) throw ValidationError(join(p, "column"), "column encoded twice");
            if (e.contains("method")) {
                const auto m = parse_encoding_method(get_string(e["method"], join(p, "method")));
                if (!m) throw ValidationError(join(p, "method"), "expected onehot or impact");
                spec.method = *m;
            }
            if (e.contains("min_count")) {
                spec.min_count = get_unsigned(e["min_count"], join(p, "min_count"));
                if (*spec.min_count == 0) throw ValidationError(join(p, "min_count"), "must be at least 1");
            }
            if (e.contains("mapping")) {
                const auto& m = require_object(e["mapping"], join(p, "mapping"));
                for (const auto& [k, v] : m.items()) {
                    spec.mapping[k] = get_string(v, join(join(p, "mapping"), k));
                }
            }
            if (e.contains("strict")) {
                spec.policy = get_bool(e["strict"], join(p, "strict")) ? UnknownPolicy::Strict : UnknownPolicy::Lenient;
            }
            cfg.encoders.push_back(std::move(spec));
        }
    }

    if (root.contains("resampler")) cfg.resampler = parse_resampler(root["resampler"], "resampler", ResampleConfig{});

    if (!root.contains("models")) throw ValidationError("models", "required");
    if (!root["models"].is_array()) throw ValidationError("models", "expected an array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < root["models"].size(); ++i) {
        const std::string p = index("models", i);
        ModelEntry entry = parse_model(root["models"][i], p);
        if (root["models"][i].contains("resampler")) {
            entry.resampler = parse_resampler(root["models"][i]["resampler"], join(p, "resampler"), cfg.resampler);
        }
        if (!names.insert(entry.model.name).second) {
            throw ValidationError(join(p, "name"), "duplicate model name '" + entry.model.name + "'");
        }
        cfg.models.push_back(std::move(entry));
    }

    if (root.contains("output")) cfg.output = get_string(root["output"], "output");
    if (root.contains("formats")) {
        const auto& f = root["formats"];
        if (!f.is_array()) throw ValidationError("formats", "expected an array");
        cfg.formats.clear();
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto parsed = parse_formats(get_string(f[i], index("formats", i)));
            cfg.formats.insert(cfg.formats.end(), parsed.begin(), parsed.end());
        }
    }
    if (root.contains("threads")) cfg.threads = static_cast<unsigned>(get_unsigned(root["threads"], "threads"));
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, "cannot open config '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    ExperimentConfig cfg = parse_config(text.str());
    if (cfg.dataset.is_relative()) {
        cfg.dataset = path.parent_path() / cfg.dataset;
    }
    return cfg;
}

} // namespace rebal
