#include "rebal/synthetic.hpp"

#include "rebal/error.hpp"
#include "rebal/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace rebal {

namespace {

struct Categorical {
    std::vector<std::string> levels;
    std::vector<double> negative; // weights given target 0
    std::vector<double> positive; // weights given target 1
};

const std::string& draw(Rng& rng, const Categorical& c, bool positive) {
    const auto& w = positive ? c.positive : c.negative;
    double total = 0.0;
    for (double v : w) total += v;
    double u = rng.uniform01() * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (u < w[i]) return c.levels[i];
        u -= w[i];
    }
    return c.levels.back();
}

const std::vector<Categorical>& categorical_columns() {
    static const std::vector<Categorical> cols{
        {{"Male", "Female", "Other"}, {0.90, 0.08, 0.02}, {0.86, 0.11, 0.03}},
        {{"Has relevent experience", "No relevent experience"}, {0.77, 0.23}, {0.60, 0.40}},
        {{"no_enrollment", "Full time course", "Part time course"}, {0.77, 0.16, 0.07}, {0.60, 0.33, 0.07}},
        {{"Graduate", "Masters", "High School", "Phd", "Primary School"},
         {0.58, 0.25, 0.11, 0.03, 0.03},
         {0.68, 0.20, 0.08, 0.01, 0.03}},
        {{"STEM", "Humanities", "Other", "Business Degree", "Arts", "No Major"},
         {0.88, 0.04, 0.02, 0.02, 0.02, 0.02},
         {0.86, 0.04, 0.03, 0.02, 0.02, 0.03}},
    };
    return cols;
}

const Categorical& company_size() {
    static const Categorical c{{"<10", "10/49", "50-99", "100-500", "500-999", "1000-4999", "5000-9999", "10000+"},
                               {0.08, 0.09, 0.22, 0.19, 0.07, 0.10, 0.05, 0.20},
                               {0.14, 0.12, 0.24, 0.14, 0.06, 0.08, 0.04, 0.18}};
    return c;
}

const Categorical& company_type() {
    static const Categorical c{{"Pvt Ltd", "Funded Startup", "Public Sector", "Early Stage Startup", "NGO", "Other"},
                               {0.74, 0.08, 0.07, 0.04, 0.04, 0.03},
                               {0.70, 0.05, 0.10, 0.06, 0.04, 0.05}};
    return c;
}

std::string experience_token(double years) {
    if (years < 1.0) return "<1";
    if (years >= 21.0) return ">20";
    return std::to_string(static_cast<int>(std::floor(years)));
}

} // namespace

Schema hr_schema() {
    return {
        {"city_development_index", ColumnKind::Numeric},
        {"gender", ColumnKind::Categorical},
        {"relevent_experience", ColumnKind::Categorical},
        {"enrolled_university", ColumnKind::Categorical},
        {"education_level", ColumnKind::Categorical},
        {"major_discipline", ColumnKind::Categorical},
        {"experience", ColumnKind::Categorical},
        {"company_size", ColumnKind::Categorical},
        {"company_type", ColumnKind::Categorical},
        {"target", ColumnKind::BinaryTarget},
    };
}

Dataset generate_hr_dataset(const SyntheticSpec& spec) {
    if (!(spec.positive_rate >= 0.0 && spec.positive_rate <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "positive rate must lie in [0, 1]");
    }
    if (!(spec.missing_rate >= 0.0 && spec.missing_rate < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "missing rate must lie in [0, 1)");
    }
    Rng rng(spec.seed);
    const std::size_t n = spec.rows;
    const auto positives =
        std::min(n, static_cast<std::size_t>(std::floor(spec.positive_rate * static_cast<double>(n) + 0.5)));
    std::vector<int> labels(n, 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(positives), 1);
    rng.shuffle(labels);

    std::vector<Row> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool pos = labels[i] == 1;
        Row row;
        row.reserve(10);

        const double cdi = pos ? 0.70 + 0.13 * rng.normal() : 0.84 + 0.09 * rng.normal();
        row.emplace_back(std::round(std::clamp(cdi, 0.448, 0.949) * 1000.0) / 1000.0);

        auto maybe_missing = [&](const std::string& value) -> Cell {
            if (spec.missing_rate > 0.0 && rng.uniform01() < spec.missing_rate) return Missing{};
            return value;
        };
        for (const auto& col : categorical_columns()) {
            row.push_back(maybe_missing(draw(rng, col, pos)));
        }
        const double years = pos ? 6.5 + 5.5 * rng.normal() : 10.5 + 6.5 * rng.normal();
        row.push_back(maybe_missing(experience_token(years)));
        row.push_back(maybe_missing(draw(rng, company_size(), pos)));
        row.push_back(maybe_missing(draw(rng, company_type(), pos)));
        row.emplace_back(pos ? 1.0 : 0.0);
        rows.push_back(std::move(row));
    }
    return Dataset(hr_schema(), std::move(rows));
}

} // namespace rebal
