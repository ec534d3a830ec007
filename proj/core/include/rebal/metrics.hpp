#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rebal {

/// Binary confusion counts; label 1 is the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred);

struct MetricsReport {
    std::string model_name;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    ConfusionMatrix cm;
    bool degenerate = false; ///< some ratio was 0/0 and set to 0

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Harmonic mean of precision and recall; 0 when both are 0.
double f1_score(double precision, double recall) noexcept;

MetricsReport compute_metrics(const ConfusionMatrix& cm, std::string model_name);

/// Fixed-width text table: MLA, Precision, Recall, F1-score, Accuracy as
/// two-decimal percentages, rows in input order.
std::string format_report_table(std::span<const MetricsReport> reports);

/// "53.90%"
std::string format_percent(double fraction);

nlohmann::json to_json(const MetricsReport& report);
nlohmann::json to_json(std::span<const MetricsReport> reports);

} // namespace rebal
