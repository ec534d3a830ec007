#pragma once

#include "rebal/dataset.hpp"
#include "rebal/matrix.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rebal {

/// Bucket for merged rare categories. Rejected as a raw input value.
inline constexpr std::string_view kOtherToken = "__OTHER__";

/// How encoders treat values outside their fitted vocabulary.
enum class UnknownPolicy { Lenient, Strict };

// One-hot -----------------------------------------------------------------

/// Sorted distinct non-missing values of a categorical column.
std::vector<std::string> category_vocabulary(const Dataset& d, std::string_view column);

/// K indicator columns named "column=category". Unseen (or missing) values
/// give an all-zero row when lenient and throw UnseenCategory when strict.
FeatureMatrix one_hot_encode(const Dataset& d, std::string_view column,
                             std::span<const std::string> categories,
                             UnknownPolicy policy = UnknownPolicy::Lenient);

// Modality reduction ------------------------------------------------------

std::map<std::string, std::size_t> category_frequencies(const Dataset& d, std::string_view column);

/// Categories seen at least min_count times. Throws ReservedToken if the
/// column already contains the other-token.
std::set<std::string> frequent_categories(const Dataset& d, std::string_view column,
                                          std::size_t min_count);

/// Replaces every value outside `kept` with the other-token.
Dataset apply_rare_merge(const Dataset& d, std::string_view column, const std::set<std::string>& kept);

/// frequent_categories + apply_rare_merge on the same data.
Dataset merge_rare_categories(const Dataset& d, std::string_view column, std::size_t min_count);

/// Substitutes mapped values by their group token. Unmapped values pass
/// through when lenient and throw UnmappedCategory when strict.
Dataset group_categories(const Dataset& d, std::string_view column,
                         const std::map<std::string, std::string>& mapping,
                         UnknownPolicy policy = UnknownPolicy::Lenient);

// Impact encoding ---------------------------------------------------------

struct CategoryStats {
    std::size_t count = 0;
    double cond_mean = 0.0; ///< mean target over rows with this category
    double impact = 0.0;    ///< cond_mean - global_mean

    friend bool operator==(const CategoryStats&, const CategoryStats&) = default;
};

/// Fitted per-category target statistics for one column.
struct CategoryMap {
    std::string column;
    double global_mean = 0.0;
    std::map<std::string, CategoryStats> per_category;
    double fallback_impact = 0.0;

    double impact_of(std::string_view category) const;

    friend bool operator==(const CategoryMap&, const CategoryMap&) = default;
};

CategoryMap impact_encode_fit(const Dataset& d, std::string_view column);

/// One column named after the map's column; unseen or missing values get
/// the fallback impact.
FeatureMatrix impact_encode_apply(const Dataset& d, const CategoryMap& map);

nlohmann::json to_json(const CategoryMap& map);
CategoryMap category_map_from_json(const nlohmann::json& j);

// Column-wise encoder -----------------------------------------------------

enum class EncodingMethod { OneHot, Impact };

std::string_view to_string(EncodingMethod method) noexcept;
std::optional<EncodingMethod> parse_encoding_method(std::string_view text) noexcept;

struct ColumnEncoderSpec {
    std::string column;
    EncodingMethod method = EncodingMethod::OneHot;
    std::optional<std::size_t> min_count;           ///< rare-category merge threshold
    std::map<std::string, std::string> mapping;     ///< applied before merging
    UnknownPolicy policy = UnknownPolicy::Lenient;  ///< for mapping and one-hot
};

/// Encoder for a whole dataset, fitted once and applied unchanged.
///
/// Numeric columns pass through; categorical columns are grouped, merged,
/// then one-hot or impact encoded (one-hot when no spec names them). The
/// target column is never part of the output.
class FittedEncoder {
public:
    static FittedEncoder fit(const Dataset& train, std::span<const ColumnEncoderSpec> specs);

    FeatureMatrix transform(const Dataset& d) const;
    const std::vector<std::string>& output_columns() const noexcept { return output_columns_; }

    nlohmann::json to_json() const;

private:
    struct Step {
        std::string column;
        ColumnKind kind = ColumnKind::Numeric;
        ColumnEncoderSpec spec;
        std::optional<std::set<std::string>> kept;
        std::vector<std::string> vocabulary;
        std::optional<CategoryMap> impact;
    };

    Dataset prepare_column(const Dataset& d, const Step& step) const;

    std::vector<Step> steps_;
    std::vector<std::string> output_columns_;
};

} // namespace rebal
