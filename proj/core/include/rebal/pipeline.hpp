#pragma once

#include "rebal/dataset.hpp"
#include "rebal/encoding.hpp"
#include "rebal/error.hpp"
#include "rebal/metrics.hpp"
#include "rebal/models.hpp"
#include "rebal/resampling.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rebal {

/// Config validation failure at a JSON field path such as "models[1].family".
class ValidationError : public Error {
public:
    ValidationError(std::string path, const std::string& message)
        : Error(ErrorCode::ValidationError, "at '" + path + "': " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct ModelEntry {
    ModelConfig model;
    /// Overrides the experiment-level resampler for this model.
    std::optional<ResampleConfig> resampler;
};

enum class ReportFormat { Json, Text };

struct ExperimentConfig {
    std::filesystem::path dataset;
    Schema schema;
    std::string target;
    SplitSpec split;
    std::vector<ColumnEncoderSpec> encoders;
    ResampleConfig resampler;
    std::vector<ModelEntry> models;
    std::filesystem::path output = "out";
    std::vector<ReportFormat> formats{ReportFormat::Json, ReportFormat::Text};
    unsigned threads = 0; ///< 0: all hardware threads

    const ResampleConfig& resampler_for(const ModelEntry& m) const {
        return m.resampler ? *m.resampler : resampler;
    }
};

/// Parses and validates a JSON experiment document, filling defaults.
/// Throws ParseError on malformed JSON and ValidationError otherwise.
ExperimentConfig parse_config(std::string_view text);

/// parse_config on a file; a relative dataset path is resolved against the
/// file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);

std::vector<ReportFormat> parse_formats(std::string_view comma_list);

/// Cleaned, split and encoded data ready for resampling and fitting.
struct PreparedData {
    std::size_t rows_loaded = 0;
    Dataset cleaned;
    SplitIndices split;  ///< indices into `cleaned`
    Dataset train;
    Dataset test;
    FittedEncoder encoder;
    FeatureMatrix x_train;
    FeatureMatrix x_test;
    std::vector<int> y_train;
    std::vector<int> y_test;
};

/// Loads cfg.dataset and runs up to encoding.
PreparedData prepare_data(const ExperimentConfig& cfg);
/// Same, from an already loaded table.
PreparedData prepare_data(const ExperimentConfig& cfg, const Dataset& raw);

struct ModelRun {
    std::string name;
    std::string resampler;
    ClassCounts train_counts{};  ///< after resampling
    std::size_t synthetic_rows = 0;
    Model model;
};

struct RunMetadata {
    std::uint64_t split_seed = 0;
    std::size_t rows_loaded = 0;
    std::size_t rows_after_clean = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    ClassCounts train_counts{};
    ClassCounts test_counts{};
    std::size_t feature_count = 0;
    std::chrono::system_clock::time_point started;
    std::chrono::system_clock::time_point finished;
};

struct RunResult {
    std::vector<MetricsReport> reports;
    std::vector<ModelRun> runs;
    RunMetadata metadata;

    /// Deterministic report document: {"metadata": {...}, "reports": [...]}.
    /// Wall-clock timestamps are not part of it.
    nlohmann::json report_json() const;
};

struct RunOptions {
    std::optional<unsigned> threads; ///< overrides cfg.threads
};

/// clean -> split -> fit encoders on train -> encode -> resample train ->
/// fit -> evaluate on the untouched test split. Module errors are rethrown
/// as StageError naming the stage.
RunResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});
RunResult run_experiment(const ExperimentConfig& cfg, const Dataset& raw, const RunOptions& options = {});

/// Writes report.json and/or report.txt (table plus confusion matrices)
/// into `dir`, creating it if needed. Returns the written paths.
std::vector<std::filesystem::path> emit_report(const RunResult& result, std::span<const ReportFormat> formats,
                                               const std::filesystem::path& dir);

/// Table followed by one confusion matrix per model.
std::string format_text_report(const RunResult& result);

} // namespace rebal
