#include "doctest.h"

#include "rebal/dataset.hpp"
#include "rebal/error.hpp"
#include "rebal/random.hpp"
#include "rebal/synthetic.hpp"

#include <algorithm>
#include <map>
#include <sstream>

using namespace rebal;

namespace {

Schema gender_target() { return {{"gender", ColumnKind::Categorical}, {"target", ColumnKind::BinaryTarget}}; }

Dataset from_text(const std::string& text, const Schema& schema) {
    std::istringstream in(text);
    return read_csv(in, schema);
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an exception");
    return ErrorCode::IoError;
}

Dataset labelled(std::span<const int> labels) {
    std::vector<Row> rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        rows.push_back({static_cast<double>(i), static_cast<double>(labels[i])});
    }
    return Dataset({{"id", ColumnKind::Numeric}, {"target", ColumnKind::BinaryTarget}}, std::move(rows));
}

} // namespace

TEST_CASE("load three-row csv") {
    const auto d = from_text("gender,target\nMale,0\nFemale,1\nMale,1\n", gender_target());
    CHECK(d.row_count() == 3);
    CHECK(std::get<std::string>(d.cell(1, 0)) == "Female");
    CHECK(std::get<double>(d.cell(2, 1)) == 1.0);
}

TEST_CASE("header order does not matter") {
    const auto d = from_text("target,gender\n1,Male\n", gender_target());
    CHECK(std::get<std::string>(d.cell(0, 0)) == "Male");
    CHECK(std::get<double>(d.cell(0, 1)) == 1.0);
}

TEST_CASE("header missing the target is rejected") {
    CHECK(code_of([] { from_text("gender\nMale\n", gender_target()); }) == ErrorCode::HeaderMismatch);
    CHECK(code_of([] { from_text("gender,target,extra\nMale,1,x\n", gender_target()); }) ==
          ErrorCode::HeaderMismatch);
}

TEST_CASE("error message names missing columns") {
    try {
        from_text("gender\nMale\n", gender_target());
        FAIL("expected HeaderMismatch");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("target") != std::string::npos);
    }
}

TEST_CASE("ragged rows are malformed") {
    CHECK(code_of([] { from_text("gender,target\nMale\n", gender_target()); }) == ErrorCode::MalformedRow);
    CHECK(code_of([] { from_text("gender,target\n\"Male,1\n", gender_target()); }) == ErrorCode::MalformedRow);
}

TEST_CASE("missing file") {
    CHECK(code_of([] { load_csv("/nonexistent/file.csv", gender_target()); }) == ErrorCode::FileNotFound);
}

TEST_CASE("empty and NaN cells load as missing") {
    const Schema s{{"cdi", ColumnKind::Numeric}, {"gender", ColumnKind::Categorical}, {"target", ColumnKind::BinaryTarget}};
    const auto d = from_text("cdi,gender,target\n,Male,1\nNaN,NaN,0\nabc,x,yes\n0.92,\"a,b\",0\n", s);
    REQUIRE(d.row_count() == 4);
    CHECK(is_missing(d.cell(0, 0)));
    CHECK(is_missing(d.cell(1, 0)));
    CHECK(is_missing(d.cell(1, 1)));
    CHECK(is_missing(d.cell(2, 0)));
    CHECK(is_missing(d.cell(2, 2)));
    CHECK(std::get<double>(d.cell(3, 0)) == 0.92);
    CHECK(std::get<std::string>(d.cell(3, 1)) == "a,b");
}

TEST_CASE("quoted fields with escaped quotes and CRLF") {
    const auto recs = [] {
        std::istringstream in("a,b\r\n\"x \"\"y\"\"\",\"line\nbreak\"\r\n");
        return parse_csv_records(in);
    }();
    REQUIRE(recs.size() == 2);
    CHECK(recs[1][0] == "x \"y\"");
    CHECK(recs[1][1] == "line\nbreak");
}

TEST_CASE("csv write and read preserve the table") {
    const auto d = generate_hr_dataset({200, 0.2, 5, 0.05});
    std::stringstream buf;
    write_csv(buf, d);
    CHECK(read_csv(buf, hr_schema()) == d);
}

TEST_CASE("drop_missing") {
    const Schema s{{"cdi", ColumnKind::Numeric}, {"target", ColumnKind::BinaryTarget}};
    const Dataset with_gap(s, {{0.1, 0.0}, {Missing{}, 1.0}, {0.3, 1.0}});
    const auto cleaned = drop_missing(with_gap);
    REQUIRE(cleaned.row_count() == 2);
    CHECK(std::get<double>(cleaned.cell(0, 0)) == 0.1);
    CHECK(std::get<double>(cleaned.cell(1, 0)) == 0.3);

    const Dataset full(s, {{0.1, 0.0}, {0.2, 1.0}});
    CHECK(drop_missing(full) == full);

    const Dataset none(s, {{Missing{}, 0.0}, {0.2, Missing{}}});
    CHECK(drop_missing(none).row_count() == 0);
}

TEST_CASE("drop_missing is idempotent") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto d = generate_hr_dataset({300, 0.15, seed, 0.1});
        const auto once = drop_missing(d);
        CHECK(drop_missing(once) == once);
        CHECK(once.row_count() < d.row_count());
    }
}

TEST_CASE("cast_columns") {
    const Schema raw{{"cdi", ColumnKind::Categorical}, {"target", ColumnKind::Categorical}};
    std::vector<Row> rows{{std::string("0.92"), std::string("0")},
                          {std::string("x"), std::string("1")},
                          {std::string("0.5"), std::string("yes")}};
    Dataset d(raw, rows);
    const auto cast = cast_columns(d, {{"cdi", ColumnKind::Numeric}, {"target", ColumnKind::BinaryTarget}});
    CHECK(cast.schema()[0].kind == ColumnKind::Numeric);
    CHECK(std::get<double>(cast.cell(0, 0)) == 0.92);
    CHECK(is_missing(cast.cell(1, 0)));
    CHECK(std::get<double>(cast.cell(0, 1)) == 0.0);
    CHECK(std::get<double>(cast.cell(1, 1)) == 1.0);
    CHECK(is_missing(cast.cell(2, 1)));
    CHECK(drop_missing(cast).row_count() == 1);

    CHECK(code_of([&] { cast_columns(d, {{"nope", ColumnKind::Numeric}}); }) == ErrorCode::UnknownColumn);
}

TEST_CASE("numbers cast to categorical keep their text form") {
    const Dataset d({{"size", ColumnKind::Numeric}, {"target", ColumnKind::BinaryTarget}}, {{50.0, 0.0}, {0.25, 1.0}});
    const auto cast = cast_columns(d, {{"size", ColumnKind::Categorical}});
    CHECK(std::get<std::string>(cast.cell(0, 0)) == "50");
    CHECK(std::get<std::string>(cast.cell(1, 0)) == "0.25");
}

TEST_CASE("split sizes match the 80/20 table") {
    const auto idx = split_indices(8955, {0.2, 7, false});
    CHECK(idx.train.size() == 7164);
    CHECK(idx.test.size() == 1791);
}

TEST_CASE("split with zero test fraction") {
    const int labels[] = {0, 1, 0, 1};
    const auto d = labelled(labels);
    const auto [train, test] = train_test_split(d, {0.0, 1, false});
    CHECK(train == d);
    CHECK(test.row_count() == 0);
}

TEST_CASE("split of an empty dataset") {
    CHECK(code_of([] { split_indices(0, {}); }) == ErrorCode::EmptyDataset);
}

TEST_CASE("round half up on the test size") {
    CHECK(test_size_for(5, 0.5) == 3);
    CHECK(test_size_for(3, 0.5) == 2);
    CHECK(test_size_for(10, 1.0) == 10);
    CHECK(test_size_for(8955, 0.2) == 1791);
}

TEST_CASE("stratified split of a balanced dataset") {
    std::vector<int> labels(100);
    for (int i = 0; i < 100; ++i) labels[i] = i % 2;
    const auto d = labelled(labels);
    const auto [train, test] = train_test_split(d, {0.2, 3, true});
    const auto c = class_counts(test);
    CHECK(c[0] == 10);
    CHECK(c[1] == 10);
    CHECK(train.row_count() == 80);
}

TEST_CASE("split partition properties") {
    Rng gen(99);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + gen.uniform_index(300);
        std::vector<int> labels(n);
        for (auto& y : labels) y = gen.uniform01() < 0.2 ? 1 : 0;
        const SplitSpec spec{gen.uniform01(), gen.next_u64(), trial % 2 == 0};
        const auto d = labelled(labels);
        const auto idx = split_indices(n, spec, labels);

        // exact partition of [0, n)
        std::vector<std::size_t> all = idx.train;
        all.insert(all.end(), idx.test.begin(), idx.test.end());
        std::sort(all.begin(), all.end());
        bool exact = all.size() == n;
        for (std::size_t i = 0; exact && i < n; ++i) exact = all[i] == i;
        CHECK(exact);
        CHECK(idx.test.size() == test_size_for(n, spec.test_fraction));

        // same seed, same partition
        const auto again = split_indices(n, spec, labels);
        CHECK(again.train == idx.train);
        CHECK(again.test == idx.test);

        const auto [train, test] = train_test_split(d, spec);
        const auto ct = class_counts(train);
        const auto cs = class_counts(test);
        const auto cd = class_counts(d);
        CHECK(ct[0] + cs[0] == cd[0]);
        CHECK(ct[1] + cs[1] == cd[1]);

        if (spec.stratified) {
            for (int l = 0; l < 2; ++l) {
                const double exact_share = spec.test_fraction * static_cast<double>(cd[l]);
                CHECK(std::abs(static_cast<double>(cs[l]) - exact_share) <= 1.0);
            }
        }
    }
}

TEST_CASE("class counts") {
    const int labels[] = {1, 0, 1};
    const auto c = class_counts(labelled(labels));
    CHECK(c[0] == 1);
    CHECK(c[1] == 2);

    const Dataset empty({{"target", ColumnKind::BinaryTarget}}, {});
    CHECK(class_counts(empty) == ClassCounts{0, 0});

    const Dataset uncast({{"target", ColumnKind::Categorical}}, {{std::string("1")}});
    CHECK(code_of([&] { class_counts(uncast); }) == ErrorCode::UncastTarget);
    const Dataset gap({{"target", ColumnKind::BinaryTarget}}, {{Missing{}}});
    CHECK(code_of([&] { class_counts(gap); }) == ErrorCode::UncastTarget);
}

TEST_CASE("schema validation") {
    CHECK_NOTHROW(validate_schema(gender_target()));
    CHECK(code_of([] { validate_schema({{"a", ColumnKind::Numeric}}); }) == ErrorCode::InvalidSchema);
    CHECK(code_of([] {
              validate_schema({{"a", ColumnKind::BinaryTarget}, {"a", ColumnKind::Numeric}});
          }) == ErrorCode::InvalidSchema);
    CHECK(code_of([] { validate_schema({{"", ColumnKind::BinaryTarget}}); }) == ErrorCode::InvalidSchema);
}

TEST_CASE("synthetic generator shape") {
    const auto d = generate_hr_dataset({5000, 0.156, 11, 0.0});
    CHECK(d.column_count() == 10);
    const auto c = class_counts(d);
    CHECK(c[1] == 780);
    CHECK(c[0] + c[1] == 5000);
    CHECK(generate_hr_dataset({5000, 0.156, 11, 0.0}) == d);
}
