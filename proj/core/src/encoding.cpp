#include "rebal/encoding.hpp"

#include "rebal/error.hpp"

#include <algorithm>
#include <unordered_map>

namespace rebal {

namespace {

std::size_t categorical_column(const Dataset& d, std::string_view column) {
    const std::size_t c = d.column_index(column);
    if (d.schema()[c].kind != ColumnKind::Categorical) {
        throw Error(ErrorCode::NotCategorical, "column '" + std::string(column) + "' is not categorical");
    }
    return c;
}

const std::string* category_at(const Dataset& d, std::size_t r, std::size_t c) {
    return std::get_if<std::string>(&d.cell(r, c));
}

} // namespace

FeatureMatrix hconcat(std::span<const FeatureMatrix> parts) {
    FeatureMatrix out;
    if (parts.empty()) {
        return out;
    }
    const std::size_t rows = parts.front().n_rows();
    std::size_t cols = 0;
    for (const auto& p : parts) {
        if (p.n_rows() != rows) {
            throw Error(ErrorCode::DimensionMismatch, "hconcat: row counts differ");
        }
        cols += p.n_cols();
        out.column_names.insert(out.column_names.end(), p.column_names.begin(), p.column_names.end());
    }
    out.values = Matrix(rows, cols);
    std::size_t offset = 0;
    for (const auto& p : parts) {
        for (std::size_t r = 0; r < rows; ++r) {
            const auto src = p.values.row(r);
            std::copy(src.begin(), src.end(), out.values.row(r).begin() + static_cast<std::ptrdiff_t>(offset));
        }
        offset += p.n_cols();
    }
    return out;
}

// One-hot -----------------------------------------------------------------

std::vector<std::string> category_vocabulary(const Dataset& d, std::string_view column) {
    const std::size_t c = categorical_column(d, column);
    std::set<std::string> seen;
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        if (const auto* s = category_at(d, r, c)) {
            seen.insert(*s);
        }
    }
    return {seen.begin(), seen.end()};
}

FeatureMatrix one_hot_encode(const Dataset& d, std::string_view column,
                             std::span<const std::string> categories, UnknownPolicy policy) {
    if (categories.empty()) {
        throw Error(ErrorCode::EmptyCategoryList, "one-hot encoding of '" + std::string(column) +
                                                      "' needs at least one category");
    }
    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t j = 0; j < categories.size(); ++j) {
        if (!position.emplace(categories[j], j).second) {
            throw Error(ErrorCode::InvalidArgument, "duplicate category '" + categories[j] + "'");
        }
    }
    const std::size_t c = categorical_column(d, column);

    FeatureMatrix out;
    out.column_names.reserve(categories.size());
    for (const auto& cat : categories) {
        out.column_names.push_back(std::string(column) + "=" + cat);
    }
    out.values = Matrix(d.row_count(), categories.size());
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        const auto* s = category_at(d, r, c);
        const auto it = s ? position.find(*s) : position.end();
        if (it != position.end()) {
            out.values(r, it->second) = 1.0;
        } else if (policy == UnknownPolicy::Strict) {
            throw Error(ErrorCode::UnseenCategory, "row " + std::to_string(r) + ": value '" +
                                                       (s ? *s : std::string("<missing>")) +
                                                       "' not in the vocabulary of '" + std::string(column) + "'");
        }
    }
    return out;
}

// Modality reduction ------------------------------------------------------

std::map<std::string, std::size_t> category_frequencies(const Dataset& d, std::string_view column) {
    const std::size_t c = categorical_column(d, column);
    std::map<std::string, std::size_t> freq;
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        if (const auto* s = category_at(d, r, c)) {
            ++freq[*s];
        }
    }
    return freq;
}

std::set<std::string> frequent_categories(const Dataset& d, std::string_view column, std::size_t min_count) {
    if (min_count == 0) {
        throw Error(ErrorCode::InvalidArgument, "min_count must be positive");
    }
    std::set<std::string> kept;
    for (const auto& [cat, n] : category_frequencies(d, column)) {
        if (cat == kOtherToken) {
            throw Error(ErrorCode::ReservedToken, "column '" + std::string(column) + "' contains reserved value " +
                                                      std::string(kOtherToken));
        }
        if (n >= min_count) {
            kept.insert(cat);
        }
    }
    return kept;
}

Dataset apply_rare_merge(const Dataset& d, std::string_view column, const std::set<std::string>& kept) {
    const std::size_t c = categorical_column(d, column);
    std::vector<Cell> cells;
    cells.reserve(d.row_count());
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        const auto* s = category_at(d, r, c);
        if (s == nullptr) {
            cells.emplace_back(Missing{});
        } else if (kept.contains(*s)) {
            cells.emplace_back(*s);
        } else {
            cells.emplace_back(std::string(kOtherToken));
        }
    }
    return d.with_column(c, ColumnKind::Categorical, std::move(cells));
}

Dataset merge_rare_categories(const Dataset& d, std::string_view column, std::size_t min_count) {
    return apply_rare_merge(d, column, frequent_categories(d, column, min_count));
}

Dataset group_categories(const Dataset& d, std::string_view column,
                         const std::map<std::string, std::string>& mapping, UnknownPolicy policy) {
    const std::size_t c = categorical_column(d, column);
    if (mapping.empty()) {
        return d;
    }
    std::vector<Cell> cells;
    cells.reserve(d.row_count());
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        const auto* s = category_at(d, r, c);
        if (s == nullptr) {
            cells.emplace_back(Missing{});
            continue;
        }
        if (auto it = mapping.find(*s); it != mapping.end()) {
            cells.emplace_back(it->second);
        } else if (policy == UnknownPolicy::Strict) {
            throw Error(ErrorCode::UnmappedCategory, "value '" + *s + "' of column '" + std::string(column) +
                                                         "' has no group mapping");
        } else {
            cells.emplace_back(*s);
        }
    }
    return d.with_column(c, ColumnKind::Categorical, std::move(cells));
}

// Impact encoding ---------------------------------------------------------

double CategoryMap::impact_of(std::string_view category) const {
    if (auto it = per_category.find(std::string(category)); it != per_category.end()) {
        return it->second.impact;
    }
    return fallback_impact;
}

CategoryMap impact_encode_fit(const Dataset& d, std::string_view column) {
    const std::size_t c = categorical_column(d, column);
    if (d.empty()) {
        throw Error(ErrorCode::EmptyDataset, "impact encoding needs at least one row");
    }
    const auto labels = d.labels();

    struct Sum {
        std::size_t n = 0;
        double y = 0.0;
    };
    std::map<std::string, Sum> groups;
    double total = 0.0;
    std::size_t fitted = 0;
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        const auto* s = category_at(d, r, c);
        if (s == nullptr) {
            continue;
        }
        auto& g = groups[*s];
        ++g.n;
        g.y += labels[r];
        total += labels[r];
        ++fitted;
    }
    if (fitted == 0) {
        throw Error(ErrorCode::EmptyDataset, "column '" + std::string(column) + "' has no non-missing values");
    }

    CategoryMap map;
    map.column = std::string(column);
    map.global_mean = total / static_cast<double>(fitted);
    for (const auto& [cat, g] : groups) {
        CategoryStats stats;
        stats.count = g.n;
        stats.cond_mean = g.y / static_cast<double>(g.n);
        stats.impact = stats.cond_mean - map.global_mean;
        map.per_category.emplace(cat, stats);
    }
    map.fallback_impact = 0.0;
    return map;
}

FeatureMatrix impact_encode_apply(const Dataset& d, const CategoryMap& map) {
    const std::size_t c = d.column_index(map.column);
    FeatureMatrix out;
    out.column_names = {map.column};
    out.values = Matrix(d.row_count(), 1);
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        const auto* s = category_at(d, r, c);
        out.values(r, 0) = s ? map.impact_of(*s) : map.fallback_impact;
    }
    return out;
}

nlohmann::json to_json(const CategoryMap& map) {
    nlohmann::json cats = nlohmann::json::array();
    for (const auto& [value, s] : map.per_category) {
        cats.push_back({{"value", value}, {"count", s.count}, {"cond_mean", s.cond_mean}, {"impact", s.impact}});
    }
    return {{"column", map.column},
            {"global_mean", map.global_mean},
            {"categories", std::move(cats)},
            {"fallback_impact", map.fallback_impact}};
}

CategoryMap category_map_from_json(const nlohmann::json& j) {
    try {
        CategoryMap map;
        map.column = j.at("column").get<std::string>();
        map.global_mean = j.at("global_mean").get<double>();
        map.fallback_impact = j.value("fallback_impact", 0.0);
        for (const auto& e : j.at("categories")) {
            CategoryStats s;
            s.count = e.at("count").get<std::size_t>();
            s.cond_mean = e.at("cond_mean").get<double>();
            s.impact = e.at("impact").get<double>();
            map.per_category.emplace(e.at("value").get<std::string>(), s);
        }
        return map;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("category map: ") + e.what());
    }
}

// Column-wise encoder -----------------------------------------------------

std::string_view to_string(EncodingMethod method) noexcept {
    return method == EncodingMethod::OneHot ? "onehot" : "impact";
}

std::optional<EncodingMethod> parse_encoding_method(std::string_view text) noexcept {
    if (text == "onehot") return EncodingMethod::OneHot;
    if (text == "impact") return EncodingMethod::Impact;
    return std::nullopt;
}

Dataset FittedEncoder::prepare_column(const Dataset& d, const Step& step) const {
    Dataset out = group_categories(d, step.column, step.spec.mapping, step.spec.policy);
    if (step.kept) {
        out = apply_rare_merge(out, step.column, *step.kept);
    }
    return out;
}

FittedEncoder FittedEncoder::fit(const Dataset& train, std::span<const ColumnEncoderSpec> specs) {
    std::map<std::string, const ColumnEncoderSpec*> by_column;
    for (const auto& s : specs) {
        const std::size_t c = train.column_index(s.column);
        if (train.schema()[c].kind != ColumnKind::Categorical) {
            throw Error(ErrorCode::NotCategorical, "encoder configured for non-categorical column '" + s.column + "'");
        }
        by_column[s.column] = &s;
    }

    FittedEncoder enc;
    for (const auto& col : train.schema()) {
        if (col.kind == ColumnKind::BinaryTarget) {
            continue;
        }
        Step step;
        step.column = col.name;
        step.kind = col.kind;
        if (col.kind == ColumnKind::Numeric) {
            enc.output_columns_.push_back(col.name);
            enc.steps_.push_back(std::move(step));
            continue;
        }
        if (auto it = by_column.find(col.name); it != by_column.end()) {
            step.spec = *it->second;
        } else {
            step.spec.column = col.name;
        }

        Dataset grouped = group_categories(train, col.name, step.spec.mapping, step.spec.policy);
        if (step.spec.min_count) {
            step.kept = frequent_categories(grouped, col.name, *step.spec.min_count);
            grouped = apply_rare_merge(grouped, col.name, *step.kept);
        }
        if (step.spec.method == EncodingMethod::OneHot) {
            step.vocabulary = category_vocabulary(grouped, col.name);
            if (step.vocabulary.empty()) {
                throw Error(ErrorCode::EmptyCategoryList, "column '" + col.name + "' has no categories to encode");
            }
            for (const auto& v : step.vocabulary) {
                enc.output_columns_.push_back(col.name + "=" + v);
            }
        } else {
            step.impact = impact_encode_fit(grouped, col.name);
            enc.output_columns_.push_back(col.name);
        }
        enc.steps_.push_back(std::move(step));
    }
    return enc;
}

FeatureMatrix FittedEncoder::transform(const Dataset& d) const {
    std::vector<FeatureMatrix> parts;
    parts.reserve(steps_.size());
    for (const auto& step : steps_) {
        if (step.kind == ColumnKind::Numeric) {
            const std::size_t c = d.column_index(step.column);
            FeatureMatrix part;
            part.column_names = {step.column};
            part.values = Matrix(d.row_count(), 1);
            for (std::size_t r = 0; r < d.row_count(); ++r) {
                const double* v = std::get_if<double>(&d.cell(r, c));
                if (v == nullptr) {
                    throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(r) + ": numeric column '" +
                                                                step.column + "' is not cast or is missing");
                }
                part.values(r, 0) = *v;
            }
            parts.push_back(std::move(part));
            continue;
        }
        const Dataset prepared = prepare_column(d, step);
        if (step.impact) {
            parts.push_back(impact_encode_apply(prepared, *step.impact));
        } else {
            parts.push_back(one_hot_encode(prepared, step.column, step.vocabulary, step.spec.policy));
        }
    }
    FeatureMatrix out = hconcat(parts);
    if (parts.empty()) {
        out.values = Matrix(d.row_count(), 0);
    }
    return out;
}

nlohmann::json FittedEncoder::to_json() const {
    nlohmann::json cols = nlohmann::json::array();
    for (const auto& step : steps_) {
        nlohmann::json j{{"column", step.column}, {"kind", to_string(step.kind)}};
        if (step.kind == ColumnKind::Categorical) {
            j["method"] = to_string(step.spec.method);
            if (!step.spec.mapping.empty()) j["mapping"] = step.spec.mapping;
            if (step.kept) j["kept"] = *step.kept;
            if (step.impact) {
                j["impact"] = rebal::to_json(*step.impact);
            } else {
                j["vocabulary"] = step.vocabulary;
            }
        }
        cols.push_back(std::move(j));
    }
    return {{"columns", std::move(cols)}, {"output_columns", output_columns_}};
}

} // namespace rebal
