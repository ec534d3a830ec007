#include "rebal/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rebal {

namespace {

template <typename F>
auto in_stage(const std::string& stage, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e);
    }
}

nlohmann::json counts_json(const ClassCounts& c) { return {{"0", c[0]}, {"1", c[1]}}; }

} // namespace

PreparedData prepare_data(const ExperimentConfig& cfg, const Dataset& raw) {
    PreparedData out;
    out.rows_loaded = raw.row_count();
    out.cleaned = in_stage("clean", [&] { return drop_missing(cast_columns(raw, cfg.schema)); });

    in_stage("split", [&] {
        std::vector<int> labels;
        if (cfg.split.stratified) labels = out.cleaned.labels();
        out.split = split_indices(out.cleaned.row_count(), cfg.split, labels);
        out.train = out.cleaned.select_rows(out.split.train);
        out.test = out.cleaned.select_rows(out.split.test);
        out.y_train = out.train.labels();
        out.y_test = out.test.labels();
        return 0;
    });

    in_stage("encode", [&] {
        out.encoder = FittedEncoder::fit(out.train, cfg.encoders);
        out.x_train = out.encoder.transform(out.train);
        out.x_test = out.encoder.transform(out.test);
        return 0;
    });
    return out;
}

PreparedData prepare_data(const ExperimentConfig& cfg) {
    const Dataset raw = in_stage("load", [&] { return load_csv(cfg.dataset, cfg.schema); });
    return prepare_data(cfg, raw);
}

RunResult run_experiment(const ExperimentConfig& cfg, const Dataset& raw, const RunOptions& options) {
    RunResult result;
    result.metadata.started = std::chrono::system_clock::now();
    const unsigned threads = options.threads.value_or(cfg.threads);

    const PreparedData data = prepare_data(cfg, raw);
    auto& meta = result.metadata;
    meta.split_seed = cfg.split.seed;
    meta.rows_loaded = data.rows_loaded;
    meta.rows_after_clean = data.cleaned.row_count();
    meta.train_rows = data.train.row_count();
    meta.test_rows = data.test.row_count();
    meta.train_counts = class_counts(data.y_train);
    meta.test_counts = class_counts(data.y_test);
    meta.feature_count = data.x_train.n_cols();

    // models sharing a resampler reuse its output
    std::vector<std::pair<ResampleConfig, RebalanceResult>> cache;

    for (const auto& entry : cfg.models) {
        const std::string& name = entry.model.name;
        ResampleConfig rc = cfg.resampler_for(entry);
        rc.threads = threads;

        const RebalanceResult* balanced = nullptr;
        for (const auto& [key, value] : cache) {
            if (key == rc) balanced = &value;
        }
        if (balanced == nullptr) {
            auto rebalanced = in_stage("resample:" + name, [&] { return rebalance(data.x_train, data.y_train, rc); });
            cache.emplace_back(rc, std::move(rebalanced));
            balanced = &cache.back().second;
        }

        ModelConfig mc = entry.model;
        mc.threads = threads;
        Model model = in_stage("fit:" + name, [&] { return fit_model(balanced->features, balanced->labels, mc); });

        MetricsReport report = in_stage("evaluate:" + name, [&] {
            const auto probs = model.predict_proba(data.x_test.values);
            const auto predicted = classify(probs, mc.threshold);
            return compute_metrics(confusion_matrix(data.y_test, predicted), name);
        });

        ModelRun run{name, std::string(to_string(rc.strategy)), class_counts(balanced->labels), 0, std::move(model)};
        run.synthetic_rows = static_cast<std::size_t>(
            std::count_if(balanced->origins.begin(), balanced->origins.end(),
                          [](const RowOrigin& o) { return o.kind != RowOrigin::Kind::Original; }));
        result.runs.push_back(std::move(run));
        result.reports.push_back(std::move(report));
    }
    meta.finished = std::chrono::system_clock::now();
    return result;
}

RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
    const Dataset raw = in_stage("load", [&] { return load_csv(cfg.dataset, cfg.schema); });
    return run_experiment(cfg, raw, options);
}

nlohmann::json RunResult::report_json() const {
    nlohmann::json runs_json = nlohmann::json::array();
    for (const auto& r : runs) {
        runs_json.push_back({{"model", r.name},
                             {"family", to_string(r.model.family())},
                             {"resampler", r.resampler},
                             {"train_counts", counts_json(r.train_counts)},
                             {"added_rows", r.synthetic_rows}});
    }
    return {{"metadata",
             {{"split_seed", metadata.split_seed},
              {"rows_loaded", metadata.rows_loaded},
              {"rows_after_clean", metadata.rows_after_clean},
              {"train_rows", metadata.train_rows},
              {"test_rows", metadata.test_rows},
              {"train_counts", counts_json(metadata.train_counts)},
              {"test_counts", counts_json(metadata.test_counts)},
              {"feature_count", metadata.feature_count},
              {"runs", std::move(runs_json)}}},
            {"reports", to_json(std::span<const MetricsReport>(reports))}};
}

std::string format_text_report(const RunResult& result) {
    std::ostringstream out;
    out << format_report_table(result.reports);
    for (const auto& r : result.reports) {
        out << "\nConfusion matrix: " << r.model_name << "\n"
            << "              pred 0  pred 1\n"
            << "  actual 0  " << std::setw(8) << r.cm.tn << std::setw(8) << r.cm.fp << "\n"
            << "  actual 1  " << std::setw(8) << r.cm.fn << std::setw(8) << r.cm.tp << "\n";
    }
    return out.str();
}

std::vector<std::filesystem::path> emit_report(const RunResult& result, std::span<const ReportFormat> formats,
                                               const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::IoError, "cannot create '" + dir.string() + "': " + ec.message());
    }
    std::vector<std::filesystem::path> written;
    auto write = [&](const std::filesystem::path& path, const std::string& text) {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << text;
        if (!f) {
            throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
        }
        written.push_back(path);
    };
    bool json_done = false;
    bool text_done = false;
    for (auto f : formats) {
        if (f == ReportFormat::Json && !json_done) {
            write(dir / "report.json", result.report_json().dump(2) + "\n");
            json_done = true;
        } else if (f == ReportFormat::Text && !text_done) {
            write(dir / "report.txt", format_text_report(result));
            text_done = true;
        }
    }
    return written;
}

} // namespace rebal
