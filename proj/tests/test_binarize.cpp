#include <doctest.h>

#include <algorithm>

#include <sstream>

#include "minty/binarize.hpp"
#include "minty/synthdata.hpp"

using namespace minty;

namespace {

RawTable table_from(const std::string& csv) {
    std::istringstream in(csv);
    return read_csv(in);
}

std::size_t literal_index(const BinarizationSchema& s, const std::string& name) {
    for (std::size_t j = 0; j < s.literals.size(); ++j)
        if (s.literals[j].name == name) return j;
    FAIL("no literal named " << name);
    return 0;
}

} // namespace

TEST_CASE("missing tokens") {
    for (const char* s : {"", "NA", "na", "Na", "NaN", "nan", "NAN"}) CHECK(is_missing_token(s));
    for (const char* s : {"0", "N/A", "none", " NA"}) CHECK_FALSE(is_missing_token(s));
}

TEST_CASE("number parsing is strict and locale independent") {
    CHECK(parse_number("2.5") == 2.5);
    CHECK(parse_number("-1e3") == -1000.0);
    CHECK_FALSE(parse_number("2,5").has_value());
    CHECK_FALSE(parse_number("abc").has_value());
    CHECK_FALSE(parse_number("1.0x").has_value());
    CHECK_FALSE(parse_number("inf").has_value());
    CHECK(format_number(2.5) == "2.5");
    CHECK(parse_number(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("CSV reader handles quoting, missing cells and ragged rows") {
    const auto t = table_from("a,b,c\n1,\"x,y\",NA\n,\"say \"\"hi\"\"\",3\n");
    REQUIRE(t.columns.size() == 3);
    CHECK(t.rows() == 2);
    CHECK(t.columns[1].cells[0] == "x,y");
    CHECK_FALSE(t.columns[2].cells[0].has_value());
    CHECK_FALSE(t.columns[0].cells[1].has_value());
    CHECK(t.columns[1].cells[1] == "say \"hi\"");
    CHECK(t.find("c") == 2u);
    CHECK_FALSE(t.find("z").has_value());
    CHECK_THROWS_AS(table_from("a,b\n1\n"), CsvError);
    CHECK_THROWS_AS(table_from(""), CsvError);
    CHECK_THROWS_AS(table_from("a\n\"open\n"), CsvError);
}

TEST_CASE("CSV round trip") {
    const std::string csv = "name,v\n\"a,b\",1\n,2\nplain,\n";
    const auto t = table_from(csv);
    std::ostringstream out;
    write_csv(out, t);
    CHECK(out.str() == csv);
}

TEST_CASE("quantile thresholds: median of four points") {
    const auto t = table_from("col\n1\n2\n3\n4\n");
    const auto b = build_schema(t, 2);
    REQUIRE(b.schema.columns.size() == 1);
    CHECK(b.schema.columns[0].thresholds == std::vector<double>{2.5});
    CHECK(b.schema.literal_names() == std::vector<std::string>{"col ≤ 2.5", "col ≥ 2.5"});
    CHECK(b.warnings.empty());
}

TEST_CASE("quantile thresholds use observed values only and are strictly increasing") {
    const auto t = table_from("col\n1\nNA\n2\n2\n2\n3\n10\n\n");
    const auto b = build_schema(t, 4);
    const auto& th = b.schema.columns[0].thresholds;
    CHECK(std::ranges::is_sorted(th));
    CHECK(std::adjacent_find(th.begin(), th.end()) == th.end());
    for (double v : th) {
        CHECK(v > 1.0);
        CHECK(v < 10.0);
    }
}

TEST_CASE("categorical columns become one literal per category") {
    const auto t = table_from("col\nB\nA\nB\n\n");
    const auto b = build_schema(t, 4);
    CHECK(b.schema.columns[0].kind == ColumnKind::categorical);
    CHECK(b.schema.literal_names() == std::vector<std::string>{"col = A", "col = B"});
}

TEST_CASE("constant columns warn and emit nothing") {
    const auto t = table_from("c,y\n5,1\n5,2\n5,3\n");
    const auto b = build_schema(t, 3, {"y"});
    CHECK(b.schema.literals.empty());
    REQUIRE(b.warnings.size() == 1);
    CHECK(b.warnings[0].find("'c'") != std::string::npos);
}

TEST_CASE("schema building errors") {
    CHECK_THROWS_AS(build_schema(table_from("c\n1\n2\n"), 1), DomainError);
    CHECK_THROWS_AS(build_schema(table_from("c\n"), 2), DomainError);
    CHECK_THROWS_AS(build_schema(table_from("c,d\nNA,1\n,2\n"), 2), DomainError);
}

TEST_CASE("apply_schema: observed, failing and missing cells") {
    const auto t = table_from("MMSE,y\n24,1\n30,2\nNA,3\n28,4\n");
    BinarizationSchema s;
    s.columns.push_back({"MMSE", ColumnKind::continuous, {26.0}, {}});
    s.literals.push_back({0, Predicate::le, 26.0, {}, "MMSE ≤ 26"});
    s.literals.push_back({0, Predicate::ge, 26.0, {}, "MMSE ≥ 26"});
    const auto r = apply_schema(t, s, "y");
    const auto& ds = r.data;
    CHECK(r.dropped_rows == 0);
    CHECK(ds.xbar(0, 0) == 1);
    CHECK(ds.mask(0, 0) == 0);
    CHECK(ds.xbar(1, 0) == 0);
    CHECK(ds.mask(1, 0) == 0);
    CHECK(ds.xbar(2, 0) == 0);
    CHECK(ds.mask(2, 0) == 1);
    CHECK(ds.mask(2, 1) == 1);
    CHECK(ds.y == std::vector<double>{1, 2, 3, 4});
    CHECK(ds.literal_names == std::vector<std::string>{"MMSE ≤ 26", "MMSE ≥ 26"});
}

TEST_CASE("apply_schema drops rows with a missing outcome and checks the outcome column") {
    const auto t = table_from("a,y\n1,1\n2,\n3,NaN\n4,2\n");
    const auto b = build_schema(t, 2, {"y"});
    const auto r = apply_schema(t, b.schema, "y");
    CHECK(r.dropped_rows == 2);
    CHECK(r.data.n() == 2);
    CHECK_THROWS_AS(apply_schema(t, b.schema, "nope"), DomainError);
    const auto bad = table_from("a,y\n1,x\n");
    CHECK_THROWS_AS(apply_schema(bad, b.schema, "y"), DomainError);
}

TEST_CASE("mask-free table gives an all-zero mask") {
    const auto t = table_from("a,b,y\n1.5,X,0\n2.5,Y,1\n3.5,X,2\n0.5,Z,3\n");
    const auto b = build_schema(t, 3, {"y"});
    const auto r = apply_schema(t, b.schema, "y");
    CHECK(std::ranges::all_of(r.data.mask.data(), [](auto v) { return v == 0; }));
    CHECK_NOTHROW(validate_dataset(r.data));
}

TEST_CASE("threshold literals are monotone in the threshold") {
    std::string csv = "v,y\n";
    for (int i = 0; i < 40; ++i) csv += std::to_string((i * 37) % 23) + "," + std::to_string(i) + "\n";
    const auto t = table_from(csv);
    const auto b = build_schema(t, 5, {"y"});
    const auto r = apply_schema(t, b.schema, "y");
    const auto& th = b.schema.columns[0].thresholds;
    REQUIRE(th.size() >= 2);
    for (std::size_t i = 0; i < r.data.n(); ++i) {
        for (std::size_t a = 0; a + 1 < th.size(); ++a) {
            const auto le_a = literal_index(b.schema, "v ≤ " + format_number(th[a]));
            const auto le_b = literal_index(b.schema, "v ≤ " + format_number(th[a + 1]));
            const auto ge_a = literal_index(b.schema, "v ≥ " + format_number(th[a]));
            const auto ge_b = literal_index(b.schema, "v ≥ " + format_number(th[a + 1]));
            if (r.data.xbar(i, le_a)) CHECK(r.data.xbar(i, le_b));
            if (r.data.xbar(i, ge_b)) CHECK(r.data.xbar(i, ge_a));
        }
    }
}

TEST_CASE("binary columns keep their name and round-trip through CSV") {
    const auto ds = gen_toy(200, 0.2, 5);
    std::ostringstream out;
    write_csv(out, dataset_to_table(ds, "y"));
    std::istringstream in(out.str());
    const auto t = read_csv(in);
    const auto b = build_schema(t, 4, {"y"});
    const auto back = apply_schema(t, b.schema, "y").data;
    CHECK(back == ds);
}
