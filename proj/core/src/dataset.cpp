#include "rebal/dataset.hpp"

#include "rebal/error.hpp"
#include "rebal/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace rebal {

std::string_view to_string(ColumnKind kind) noexcept {
    switch (kind) {
        case ColumnKind::Numeric: return "numeric";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::BinaryTarget: return "binary-target";
    }
    return "unknown";
}

std::optional<ColumnKind> parse_column_kind(std::string_view text) noexcept {
    if (text == "numeric") return ColumnKind::Numeric;
    if (text == "categorical") return ColumnKind::Categorical;
    if (text == "binary-target") return ColumnKind::BinaryTarget;
    return std::nullopt;
}

void validate_schema(const Schema& schema) {
    std::set<std::string_view> seen;
    std::size_t targets = 0;
    for (const auto& col : schema) {
        if (col.name.empty()) {
            throw Error(ErrorCode::InvalidSchema, "column name must be non-empty");
        }
        if (!seen.insert(col.name).second) {
            throw Error(ErrorCode::InvalidSchema, "duplicate column '" + col.name + "'");
        }
        if (col.kind == ColumnKind::BinaryTarget) {
            ++targets;
        }
    }
    if (targets != 1) {
        throw Error(ErrorCode::InvalidSchema,
                    "expected exactly one binary-target column, found " + std::to_string(targets));
    }
}

namespace {

bool cell_fits(const Cell& cell, ColumnKind kind) {
    if (is_missing(cell)) {
        return true;
    }
    switch (kind) {
        case ColumnKind::Categorical:
            return std::holds_alternative<std::string>(cell);
        case ColumnKind::Numeric:
            return std::holds_alternative<double>(cell) && std::isfinite(std::get<double>(cell));
        case ColumnKind::BinaryTarget:
            if (const double* v = std::get_if<double>(&cell)) {
                return *v == 0.0 || *v == 1.0;
            }
            return false;
    }
    return false;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool is_missing_token(std::string_view raw) { return raw.empty() || raw == "NaN"; }

std::optional<double> parse_finite(std::string_view raw) {
    raw = trim(raw);
    if (raw.empty()) {
        return std::nullopt;
    }
    if (raw.front() == '+') {
        raw.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (ec != std::errc{} || ptr != raw.data() + raw.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

Cell parse_cell(std::string_view raw, ColumnKind kind) {
    if (is_missing_token(raw)) {
        return Missing{};
    }
    switch (kind) {
        case ColumnKind::Categorical:
            return std::string(raw);
        case ColumnKind::Numeric:
            if (auto v = parse_finite(raw)) return *v;
            return Missing{};
        case ColumnKind::BinaryTarget:
            if (auto v = parse_finite(raw); v && (*v == 0.0 || *v == 1.0)) return *v;
            return Missing{};
    }
    return Missing{};
}

Cell cast_cell(const Cell& cell, ColumnKind kind) {
    if (is_missing(cell)) {
        return Missing{};
    }
    if (const auto* s = std::get_if<std::string>(&cell)) {
        return parse_cell(*s, kind);
    }
    const double v = std::get<double>(cell);
    switch (kind) {
        case ColumnKind::Categorical: return format_number(v);
        case ColumnKind::Numeric: return v;
        case ColumnKind::BinaryTarget:
            if (v == 0.0 || v == 1.0) return v;
            return Missing{};
    }
    return Missing{};
}

} // namespace

Dataset::Dataset(Schema schema, std::vector<Row> rows)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
    std::set<std::string_view> seen;
    for (const auto& col : schema_) {
        if (col.name.empty() || !seen.insert(col.name).second) {
            throw Error(ErrorCode::InvalidSchema, "column names must be unique and non-empty");
        }
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (rows_[r].size() != schema_.size()) {
            throw Error(ErrorCode::MalformedRow, "row " + std::to_string(r) + " has " +
                                                     std::to_string(rows_[r].size()) + " cells, expected " +
                                                     std::to_string(schema_.size()));
        }
        for (std::size_t c = 0; c < schema_.size(); ++c) {
            if (!cell_fits(rows_[r][c], schema_[c].kind)) {
                throw Error(ErrorCode::MalformedRow, "row " + std::to_string(r) + ", column '" +
                                                         schema_[c].name + "': cell does not match kind " +
                                                         std::string(to_string(schema_[c].kind)));
            }
        }
    }
}

std::optional<std::size_t> Dataset::find_column(std::string_view name) const noexcept {
    for (std::size_t c = 0; c < schema_.size(); ++c) {
        if (schema_[c].name == name) {
            return c;
        }
    }
    return std::nullopt;
}

std::size_t Dataset::column_index(std::string_view name) const {
    if (auto c = find_column(name)) {
        return *c;
    }
    throw Error(ErrorCode::UnknownColumn, "no column named '" + std::string(name) + "'");
}

std::optional<std::size_t> Dataset::target_index() const noexcept {
    for (std::size_t c = 0; c < schema_.size(); ++c) {
        if (schema_[c].kind == ColumnKind::BinaryTarget) {
            return c;
        }
    }
    return std::nullopt;
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
    std::vector<Row> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        out.push_back(rows_.at(i));
    }
    Dataset d;
    d.schema_ = schema_;
    d.rows_ = std::move(out);
    return d;
}

Dataset Dataset::with_column(std::size_t column, ColumnKind kind, std::vector<Cell> cells) const {
    if (cells.size() != rows_.size()) {
        throw Error(ErrorCode::LengthMismatch, "replacement column length differs from row count");
    }
    Schema schema = schema_;
    schema.at(column).kind = kind;
    std::vector<Row> rows = rows_;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rows[r][column] = std::move(cells[r]);
    }
    return Dataset(std::move(schema), std::move(rows));
}

std::vector<int> Dataset::labels() const {
    const auto t = target_index();
    if (!t) {
        throw Error(ErrorCode::UncastTarget, "dataset has no binary-target column");
    }
    std::vector<int> out;
    out.reserve(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const double* v = std::get_if<double>(&rows_[r][*t]);
        if (v == nullptr) {
            throw Error(ErrorCode::UncastTarget, "target cell in row " + std::to_string(r) + " is missing");
        }
        out.push_back(*v == 1.0 ? 1 : 0);
    }
    return out;
}

// CSV ---------------------------------------------------------------------

std::vector<std::vector<std::string>> parse_csv_records(std::istream& in) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        // a bare newline yields a single empty field; skip blank lines
        if (!(record.size() == 1 && record.front().empty())) {
            records.push_back(std::move(record));
        }
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
            case '"':
                if (!field_started && field.empty()) {
                    in_quotes = true;
                    field_started = true;
                } else {
                    field.push_back(ch);
                }
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') {
                    break;
                }
                end_record();
                ++line;
                break;
            case '\n':
                end_record();
                ++line;
                break;
            default:
                field.push_back(ch);
                field_started = true;
        }
    }
    if (in_quotes) {
        throw Error(ErrorCode::MalformedRow, "unterminated quoted field near line " + std::to_string(line));
    }
    if (field_started || !field.empty() || !record.empty()) {
        end_record();
    }
    return records;
}

Dataset read_csv(std::istream& in, const Schema& schema) {
    validate_schema(schema);
    auto records = parse_csv_records(in);
    if (records.empty()) {
        throw Error(ErrorCode::HeaderMismatch, "file has no header row");
    }
    const auto& header = records.front();

    std::unordered_map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < header.size(); ++i) {
        position.emplace(std::string(trim(header[i])), i);
    }
    std::vector<std::string> missing;
    std::vector<std::size_t> source(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
        auto it = position.find(schema[c].name);
        if (it == position.end()) {
            missing.push_back(schema[c].name);
        } else {
            source[c] = it->second;
        }
    }
    std::vector<std::string> extra;
    for (const auto& h : header) {
        const std::string name(trim(h));
        if (std::none_of(schema.begin(), schema.end(), [&](const auto& s) { return s.name == name; })) {
            extra.push_back(name);
        }
    }
    if (!missing.empty() || !extra.empty() || header.size() != schema.size()) {
        std::ostringstream msg;
        msg << "header does not match schema; missing [";
        for (std::size_t i = 0; i < missing.size(); ++i) msg << (i ? ", " : "") << missing[i];
        msg << "], extra [";
        for (std::size_t i = 0; i < extra.size(); ++i) msg << (i ? ", " : "") << extra[i];
        msg << "]";
        throw Error(ErrorCode::HeaderMismatch, msg.str());
    }

    std::vector<Row> rows;
    rows.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.size() != header.size()) {
            throw Error(ErrorCode::MalformedRow, "row " + std::to_string(r - 1) + " has " +
                                                     std::to_string(rec.size()) + " cells, expected " +
                                                     std::to_string(header.size()));
        }
        Row row;
        row.reserve(schema.size());
        for (std::size_t c = 0; c < schema.size(); ++c) {
            row.push_back(parse_cell(rec[source[c]], schema[c].kind));
        }
        rows.push_back(std::move(row));
    }
    return Dataset(schema, std::move(rows));
}

Dataset load_csv(const std::filesystem::path& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
    }
    return read_csv(in, schema);
}

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

namespace {

void write_field(std::ostream& out, std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
        out << s;
        return;
    }
    out << '"';
    for (char ch : s) {
        if (ch == '"') out << '"';
        out << ch;
    }
    out << '"';
}

} // namespace

void write_csv(std::ostream& out, const Dataset& d) {
    for (std::size_t c = 0; c < d.column_count(); ++c) {
        if (c) out << ',';
        write_field(out, d.schema()[c].name);
    }
    out << '\n';
    for (const auto& row : d.rows()) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            if (const auto* s = std::get_if<std::string>(&row[c])) {
                write_field(out, *s);
            } else if (const auto* v = std::get_if<double>(&row[c])) {
                out << format_number(*v);
            }
        }
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const Dataset& d) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    }
    write_csv(out, d);
    if (!out) {
        throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
    }
}

// Cleaning ----------------------------------------------------------------

Dataset drop_missing(const Dataset& d) {
    std::vector<std::size_t> keep;
    keep.reserve(d.row_count());
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        const auto& row = d.row(r);
        if (std::none_of(row.begin(), row.end(), [](const Cell& c) { return is_missing(c); })) {
            keep.push_back(r);
        }
    }
    if (keep.size() == d.row_count()) {
        return d;
    }
    return d.select_rows(keep);
}

Dataset cast_columns(const Dataset& d, const Schema& schema) {
    Schema out_schema = d.schema();
    std::vector<std::size_t> targets;
    for (const auto& col : schema) {
        const std::size_t c = d.column_index(col.name);
        out_schema[c].kind = col.kind;
        targets.push_back(c);
    }
    std::vector<Row> rows = d.rows();
    for (auto& row : rows) {
        for (std::size_t c : targets) {
            row[c] = cast_cell(row[c], out_schema[c].kind);
        }
    }
    return Dataset(std::move(out_schema), std::move(rows));
}

// Splitting ---------------------------------------------------------------

std::size_t test_size_for(std::size_t n, double test_fraction) {
    if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "test_fraction must lie in [0, 1]");
    }
    const auto m = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(n) + 0.5));
    return std::min(m, n);
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec, std::span<const int> labels) {
    if (n == 0) {
        throw Error(ErrorCode::EmptyDataset, "cannot split an empty dataset");
    }
    const std::size_t test_total = test_size_for(n, spec.test_fraction);
    Rng rng(spec.seed);
    std::vector<char> in_test(n, 0);

    if (!spec.stratified) {
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        rng.shuffle(perm);
        for (std::size_t i = 0; i < test_total; ++i) in_test[perm[i]] = 1;
    } else {
        if (labels.size() != n) {
            throw Error(ErrorCode::UncastTarget, "stratified split requires one label per row");
        }
        std::array<std::vector<std::size_t>, 2> by_label;
        for (std::size_t i = 0; i < n; ++i) by_label[labels[i] == 1 ? 1 : 0].push_back(i);

        // Largest-remainder quotas: each label within one row of its exact share.
        std::array<std::size_t, 2> quota{};
        std::array<double, 2> remainder{};
        std::size_t assigned = 0;
        for (int l = 0; l < 2; ++l) {
            const double exact = spec.test_fraction * static_cast<double>(by_label[l].size());
            quota[l] = std::min(static_cast<std::size_t>(std::floor(exact)), by_label[l].size());
            remainder[l] = exact - static_cast<double>(quota[l]);
            assigned += quota[l];
        }
        while (assigned < test_total) {
            int pick = remainder[1] > remainder[0] ? 1 : 0;
            if (quota[pick] >= by_label[pick].size()) pick = 1 - pick;
            ++quota[pick];
            remainder[pick] = -1.0;
            ++assigned;
        }
        while (assigned > test_total) {
            int pick = remainder[1] < remainder[0] ? 1 : 0;
            if (quota[pick] == 0) pick = 1 - pick;
            --quota[pick];
            remainder[pick] = 2.0;
            --assigned;
        }
        for (int l = 0; l < 2; ++l) {
            rng.shuffle(by_label[l]);
            for (std::size_t i = 0; i < quota[l]; ++i) in_test[by_label[l][i]] = 1;
        }
    }

    SplitIndices out;
    out.test.reserve(test_total);
    out.train.reserve(n - test_total);
    for (std::size_t i = 0; i < n; ++i) {
        (in_test[i] ? out.test : out.train).push_back(i);
    }
    return out;
}

TrainTest train_test_split(const Dataset& d, const SplitSpec& spec) {
    std::vector<int> labels;
    if (spec.stratified) {
        labels = d.labels();
    }
    const auto idx = split_indices(d.row_count(), spec, labels);
    return {d.select_rows(idx.train), d.select_rows(idx.test)};
}

ClassCounts class_counts(std::span<const int> labels) {
    ClassCounts counts{0, 0};
    for (int y : labels) {
        ++counts[y == 1 ? 1 : 0];
    }
    return counts;
}

ClassCounts class_counts(const Dataset& d) {
    const auto labels = d.labels();
    return class_counts(std::span<const int>(labels));
}

} // namespace rebal
