#include "rebal/metrics.hpp"

#include "rebal/error.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <sstream>

namespace rebal {

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size()) {
        throw Error(ErrorCode::LengthMismatch, "y_true has " + std::to_string(y_true.size()) +
                                                   " labels, y_pred has " + std::to_string(y_pred.size()));
    }
    if (y_true.empty()) {
        throw Error(ErrorCode::EmptyInput, "confusion matrix needs at least one prediction");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool actual = y_true[i] == 1;
        const bool predicted = y_pred[i] == 1;
        if (actual && predicted) ++cm.tp;
        else if (!actual && predicted) ++cm.fp;
        else if (!actual) ++cm.tn;
        else ++cm.fn;
    }
    return cm;
}

double f1_score(double precision, double recall) noexcept {
    const double denom = precision + recall;
    return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm, std::string model_name) {
    MetricsReport r;
    r.model_name = std::move(model_name);
    r.cm = cm;
    auto ratio = [&](std::size_t num, std::size_t den) {
        if (den == 0) {
            r.degenerate = true;
            return 0.0;
        }
        return static_cast<double>(num) / static_cast<double>(den);
    };
    r.precision = ratio(cm.tp, cm.tp + cm.fp);
    r.recall = ratio(cm.tp, cm.tp + cm.fn);
    r.accuracy = ratio(cm.tp + cm.tn, cm.total());
    r.f1 = f1_score(r.precision, r.recall);
    return r;
}

std::string format_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f%%", fraction * 100.0);
    return buf;
}

std::string format_report_table(std::span<const MetricsReport> reports) {
    constexpr std::array<const char*, 5> header{"MLA", "Precision", "Recall", "F1-score", "Accuracy"};
    std::vector<std::array<std::string, 5>> rows;
    rows.reserve(reports.size());
    for (const auto& r : reports) {
        rows.push_back({r.model_name, format_percent(r.precision), format_percent(r.recall), format_percent(r.f1),
                        format_percent(r.accuracy)});
    }
    std::array<std::size_t, 5> width{};
    for (std::size_t c = 0; c < 5; ++c) {
        width[c] = std::string(header[c]).size();
        for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
    }

    std::ostringstream out;
    auto emit = [&](auto cell) {
        for (std::size_t c = 0; c < 5; ++c) {
            const std::string text(cell(c));
            if (c == 0) {
                out << text << std::string(width[0] - text.size(), ' ');
            } else {
                out << "  " << std::string(width[c] - text.size(), ' ') << text;
            }
        }
        out << '\n';
    };
    emit([&](std::size_t c) { return std::string(header[c]); });
    std::size_t rule = width[0];
    for (std::size_t c = 1; c < 5; ++c) rule += 2 + width[c];
    out << std::string(rule, '-') << '\n';
    for (const auto& row : rows) {
        emit([&](std::size_t c) { return row[c]; });
    }
    return out.str();
}

nlohmann::json to_json(const MetricsReport& r) {
    return {{"model", r.model_name},
            {"precision", r.precision},
            {"recall", r.recall},
            {"f1", r.f1},
            {"accuracy", r.accuracy},
            {"degenerate", r.degenerate},
            {"cm", {{"tp", r.cm.tp}, {"fp", r.cm.fp}, {"tn", r.cm.tn}, {"fn", r.cm.fn}}}};
}

nlohmann::json to_json(std::span<const MetricsReport> reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr;
}

} // namespace rebal
