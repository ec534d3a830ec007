#include "rebal/dataset.hpp"
#include "rebal/error.hpp"
#include "rebal/pipeline.hpp"
#include "rebal/resampling.hpp"
#include "rebal/synthetic.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

int exit_code_for(const rebal::Error& e) {
    switch (rebal::classify(e.code())) {
        case rebal::ErrorClass::Config: return kExitConfig;
        case rebal::ErrorClass::Data: return kExitData;
        case rebal::ErrorClass::Runtime: return kExitRuntime;
    }
    return kExitRuntime;
}

rebal::ExperimentConfig read_config(const std::string& path) {
    try {
        return rebal::load_config(path);
    } catch (const rebal::Error& e) {
        if (e.code() == rebal::ErrorCode::FileNotFound) {
            // an unreadable config is a configuration problem, not a data one
            throw rebal::Error(rebal::ErrorCode::ValidationError, e.what());
        }
        throw;
    }
}

int cmd_run(const std::string& config_path, const std::string& out_dir, const std::string& formats,
            std::optional<unsigned> threads) {
    auto cfg = read_config(config_path);
    if (!out_dir.empty()) cfg.output = out_dir;
    if (!formats.empty()) cfg.formats = rebal::parse_formats(formats);

    rebal::RunOptions options;
    options.threads = threads;
    const auto result = rebal::run_experiment(cfg, options);
    const auto written = rebal::emit_report(result, cfg.formats, cfg.output);

    std::cout << rebal::format_report_table(result.reports);
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(result.metadata.finished - result.metadata.started);
    std::cerr << "rows: loaded " << result.metadata.rows_loaded << ", clean " << result.metadata.rows_after_clean
              << ", train " << result.metadata.train_rows << ", test " << result.metadata.test_rows << "; "
              << ms.count() << " ms\n";
    for (const auto& p : written) std::cerr << "wrote " << p.string() << "\n";
    return kExitOk;
}

int cmd_generate(std::size_t rows, double positive_rate, std::uint64_t seed, double missing_rate,
                 const std::string& out) {
    rebal::SyntheticSpec spec;
    spec.rows = rows;
    spec.positive_rate = positive_rate;
    spec.seed = seed;
    spec.missing_rate = missing_rate;
    const auto d = rebal::generate_hr_dataset(spec);
    rebal::save_csv(out, d);
    const auto counts = rebal::class_counts(rebal::drop_missing(d));
    std::cerr << "wrote " << d.row_count() << " rows to " << out << " (complete rows: 0=" << counts[0]
              << ", 1=" << counts[1] << ")\n";
    return kExitOk;
}

int cmd_resample(const std::string& config_path, const std::string& out, std::string audit) {
    const auto cfg = read_config(config_path);
    const auto data = rebal::prepare_data(cfg);
    const auto result = rebal::rebalance(data.x_train, data.y_train, cfg.resampler);

    std::ofstream csv(out, std::ios::binary);
    if (!csv) throw rebal::Error(rebal::ErrorCode::IoError, "cannot write '" + out + "'");
    for (const auto& name : result.features.column_names) csv << name << ',';
    csv << cfg.target << '\n';
    for (std::size_t r = 0; r < result.features.n_rows(); ++r) {
        for (double v : result.features.values.row(r)) csv << rebal::format_number(v) << ',';
        csv << result.labels[r] << '\n';
    }

    if (audit.empty()) {
        std::filesystem::path p(out);
        audit = (p.parent_path() / (p.stem().string() + "_audit.csv")).string();
    }
    std::ofstream audit_out(audit, std::ios::binary);
    if (!audit_out) throw rebal::Error(rebal::ErrorCode::IoError, "cannot write '" + audit + "'");
    rebal::write_provenance_csv(audit_out, result);

    const auto before = rebal::class_counts(data.y_train);
    const auto after = rebal::class_counts(result.labels);
    std::cerr << "strategy " << rebal::to_string(cfg.resampler.strategy) << ": train 0=" << before[0]
              << " 1=" << before[1] << " -> 0=" << after[0] << " 1=" << after[1] << "\nwrote " << out << " and "
              << audit << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Imbalanced tabular classification: encode, rebalance, fit and evaluate"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string formats;
    unsigned threads = 0;
    auto* run = app.add_subcommand("run", "Run an experiment config and write reports");
    run->add_option("--config", config_path, "Experiment JSON")->required();
    run->add_option("--out", out_dir, "Output directory (overrides config)");
    run->add_option("--format", formats, "Comma-separated report formats: json,txt");
    auto* threads_opt = run->add_option("--threads", threads, "Worker threads, 0 for all cores");

    std::size_t rows = 8955;
    double positive_rate = 0.156;
    std::uint64_t seed = 1;
    double missing_rate = 0.0;
    std::string data_out;
    auto* gen = app.add_subcommand("generate-data", "Write a seeded synthetic HR-style CSV");
    gen->add_option("--rows", rows, "Row count")->required();
    gen->add_option("--positive-rate", positive_rate, "Fraction of target=1 rows")->required();
    gen->add_option("--seed", seed, "Generator seed")->required();
    gen->add_option("--missing-rate", missing_rate, "Chance a categorical cell is left empty");
    gen->add_option("--out", data_out, "Output CSV")->required();

    std::string resample_config;
    std::string resample_out;
    std::string audit_out;
    auto* res = app.add_subcommand("resample", "Rebalance the encoded training split and write it as CSV");
    res->add_option("--config", resample_config, "Experiment JSON")->required();
    res->add_option("--out", resample_out, "Resampled training CSV")->required();
    res->add_option("--audit", audit_out, "Provenance CSV (default: <out>_audit.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (run->parsed()) {
            return cmd_run(config_path, out_dir, formats,
                           threads_opt->count() ? std::optional<unsigned>(threads) : std::nullopt);
        }
        if (gen->parsed()) {
            return cmd_generate(rows, positive_rate, seed, missing_rate, data_out);
        }
        if (res->parsed()) {
            return cmd_resample(resample_config, resample_out, audit_out);
        }
    } catch (const rebal::StageError& e) {
        std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const rebal::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}
