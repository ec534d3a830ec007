#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rebal {

enum class ColumnKind { Numeric, Categorical, BinaryTarget };

std::string_view to_string(ColumnKind kind) noexcept;
/// Accepts "numeric", "categorical", "binary-target".
std::optional<ColumnKind> parse_column_kind(std::string_view text) noexcept;

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;

    friend bool operator==(const ColumnSchema&, const ColumnSchema&) = default;
};

using Schema = std::vector<ColumnSchema>;

/// Throws InvalidSchema unless names are unique and non-empty and exactly
/// one column is the binary target.
void validate_schema(const Schema& schema);

/// Explicit absent-value state of a cell.
struct Missing {
    friend bool operator==(Missing, Missing) noexcept { return true; }
};

using Cell = std::variant<Missing, double, std::string>;

inline bool is_missing(const Cell& c) noexcept { return std::holds_alternative<Missing>(c); }

using Row = std::vector<Cell>;

/// Immutable schema-typed table.
///
/// Numeric and target columns hold finite doubles (targets only 0 or 1),
/// categorical columns hold strings; any cell may be Missing.
class Dataset {
public:
    Dataset() = default;
    Dataset(Schema schema, std::vector<Row> rows);

    const Schema& schema() const noexcept { return schema_; }
    std::size_t row_count() const noexcept { return rows_.size(); }
    std::size_t column_count() const noexcept { return schema_.size(); }
    bool empty() const noexcept { return rows_.empty(); }

    const Row& row(std::size_t r) const { return rows_[r]; }
    const std::vector<Row>& rows() const noexcept { return rows_; }
    const Cell& cell(std::size_t r, std::size_t c) const { return rows_[r][c]; }

    std::optional<std::size_t> find_column(std::string_view name) const noexcept;
    /// Throws UnknownColumn.
    std::size_t column_index(std::string_view name) const;
    std::optional<std::size_t> target_index() const noexcept;

    /// Rows in the given order (indices may repeat).
    Dataset select_rows(std::span<const std::size_t> indices) const;

    /// Copy with one column's cells and kind replaced.
    Dataset with_column(std::size_t column, ColumnKind kind, std::vector<Cell> cells) const;

    /// Target labels as 0/1. Throws UncastTarget if there is no target
    /// column or any target cell is missing.
    std::vector<int> labels() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    Schema schema_;
    std::vector<Row> rows_;
};

// CSV ---------------------------------------------------------------------

/// Splits RFC-4180 CSV text into records. Throws MalformedRow on an
/// unterminated quoted field.
std::vector<std::vector<std::string>> parse_csv_records(std::istream& in);

/// Reads a header-first CSV; the header must equal the schema's names as a
/// set. Empty, "NaN" and unparseable cells load as Missing.
Dataset read_csv(std::istream& in, const Schema& schema);
Dataset load_csv(const std::filesystem::path& path, const Schema& schema);

/// Writes the dataset with a header row; Missing cells are written empty.
void write_csv(std::ostream& out, const Dataset& d);
void save_csv(const std::filesystem::path& path, const Dataset& d);

/// Shortest round-trip text form of a double.
std::string format_number(double value);

// Cleaning ----------------------------------------------------------------

/// Keeps rows without any Missing cell, in their original order.
Dataset drop_missing(const Dataset& d);

/// Re-types the named columns. Cells that fail the cast become Missing.
/// Columns not named in `schema` keep their current kind.
Dataset cast_columns(const Dataset& d, const Schema& schema);

// Splitting ---------------------------------------------------------------

struct SplitSpec {
    double test_fraction = 0.2;
    std::uint64_t seed = 42;
    bool stratified = false;
};

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// round-half-up(test_fraction * n)
std::size_t test_size_for(std::size_t n, double test_fraction);

/// Index partition of [0, n). Both halves are sorted ascending. `labels` is
/// required when spec.stratified is set.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec,
                           std::span<const int> labels = {});

struct TrainTest {
    Dataset train;
    Dataset test;
};

TrainTest train_test_split(const Dataset& d, const SplitSpec& spec);

using ClassCounts = std::array<std::size_t, 2>;

ClassCounts class_counts(const Dataset& d);
ClassCounts class_counts(std::span<const int> labels);

} // namespace rebal
