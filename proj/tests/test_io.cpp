#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "shiftlab/errors.hpp"
#include "shiftlab/io.hpp"
#include "shiftlab/operator_core.hpp"
#include "shiftlab/report.hpp"

using namespace shiftlab;
using nlohmann::json;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("shiftlab_test_" + name)).string();
}

}  // namespace

TEST_CASE("complex scalar syntax") {
    CHECK(parse_complex("0.3") == Complex(0.3, 0.0));
    CHECK(parse_complex("-0.4i") == Complex(0.0, -0.4));
    CHECK(parse_complex("0.5i") == Complex(0.0, 0.5));
    CHECK(parse_complex("1+2i") == Complex(1.0, 2.0));
    CHECK(parse_complex("-1.5-0.25i") == Complex(-1.5, -0.25));
    CHECK(parse_complex("i") == Complex(0.0, 1.0));
    CHECK(parse_complex("-i") == Complex(0.0, -1.0));
    CHECK(parse_complex("2-i") == Complex(2.0, -1.0));
    CHECK(parse_complex("1e-3+2e-2i") == Complex(1e-3, 2e-2));
    CHECK(parse_complex("\xE2\x88\x92" "0.4i") == Complex(0.0, -0.4));
    CHECK_THROWS_AS(parse_complex(""), InvalidArgument);
    CHECK_THROWS_AS(parse_complex("1 + 2i"), InvalidArgument);
    CHECK_THROWS_AS(parse_complex("abc"), InvalidArgument);
    CHECK_THROWS_AS(parse_complex("1+2j"), InvalidArgument);

    const auto zs = parse_complex_list("0.3,-0.4i,0.5");
    REQUIRE(zs.size() == 3);
    CHECK(zs[1] == Complex(0.0, -0.4));
    CHECK(parse_complex_list("").empty());
    CHECK(parse_real_list("1e-1,1e-2") == std::vector<double>{1e-1, 1e-2});
}

TEST_CASE("weight files") {
    const auto w = parse_weight_text("1\n2\n4\n8\n");
    CHECK(w.kind() == WeightKind::explicit_values);
    CHECK(omega_at(w, 3) == 8.0);
    CHECK(alpha_at(w, 1) == doctest::Approx(2.0));
    CHECK(parse_weight_text("1.0000000001\r\n1.5\r\n").explicit_values().size() == 2);
    CHECK_THROWS_AS(parse_weight_text("1.1\n2\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_weight_text("1\n\n2\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_weight_text("1\nx\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_weight_text(""), InvalidArgument);

    const auto path = temp_path("weights.txt");
    write_text_file(path, "1\n1.5\n2.25\n");
    const auto r = resolve_weight(path);
    CHECK(omega_at(r, 2) == 2.25);
    CHECK(resolve_weight("bergman").kind() == WeightKind::bergman);
    CHECK_THROWS_AS(resolve_weight(temp_path("missing.txt")), Error);
    std::remove(path.c_str());
}

TEST_CASE("window CSV round trip is exact") {
    CMatrix m = shift_window(WeightSequence::quasianalytic_sqrt(), 5).entries();
    m(0, 0) = Complex(-1.0 / 3.0, 1e-300);
    const auto text = matrix_to_csv(m);
    CHECK(text.substr(0, text.find('\n')).find("\"-0.33333333333333331,1e-300\"") == 0);
    const CMatrix back = matrix_from_csv(text);
    CHECK(back.rows() == 6);
    CHECK(back.cols() == 5);
    CHECK(back == m);

    const auto path = temp_path("window.csv");
    write_window_csv(path, m);
    CHECK(read_window_csv(path) == m);
    std::remove(path.c_str());

    CHECK_THROWS_AS(matrix_from_csv("1,2\n"), InvalidArgument);
    CHECK_THROWS_AS(matrix_from_csv("\"1,2\",\"3,4\"\n\"1,2\"\n"), InvalidArgument);
}

TEST_CASE("basis CSV stores column vectors") {
    CMatrix q(3, 2);
    q << 1, 0, 0, 1, 1, 1;
    const SubspaceBasis b(q);
    const auto path = temp_path("basis.csv");
    write_basis_csv(path, b);
    const auto r = read_basis_csv(path);
    CHECK(r.ambient_dim() == 3);
    CHECK(r.dim() == 2);
    CHECK(r.vectors() == b.vectors());
    write_text_file(path, "\"1,0\",\"2,0\"\n\"2,0\",\"4,0\"\n");
    CHECK_THROWS_AS(read_basis_csv(path), RankDeficient);
    std::remove(path.c_str());
}

TEST_CASE("series JSON") {
    const CoefficientSeries f{Complex(1.0, -2.0), Complex(0.0), Complex(0.5, 0.25)};
    const auto j = series_to_json(f);
    CHECK(j.dump() == "[[1.0,-2.0],[0.0,0.0],[0.5,0.25]]");
    const auto g = series_from_json(j);
    CHECK(g.coeffs() == f.coeffs());
    CHECK(series_from_json(json::array()).is_zero());
    CHECK_THROWS_AS(series_from_json(json::parse("[1, 2]")), InvalidArgument);
    CHECK_THROWS_AS(series_from_json(json::parse("{\"a\": 1}")), InvalidArgument);
}

TEST_CASE("canonical dump") {
    json j = {{"b", 0.1}, {"a", {1, 2.5, std::numeric_limits<double>::quiet_NaN()}}, {"c", "x"},
              {"d", std::numeric_limits<double>::infinity()}, {"e", true}};
    CHECK(canonical_dump(j) == "{\"a\":[1,2.5,null],\"b\":0.10000000000000001,\"c\":\"x\",\"d\":null,\"e\":true}\n");
    CHECK(canonical_dump(json::parse(canonical_dump(j))) == canonical_dump(j));
}

TEST_CASE("report document and steps CSV") {
    ExperimentReport r;
    r.experiment = "demo";
    r.inputs = {{"seed", 4}};
    r.per_step.push_back({0.5, {{"distance", 0.25}, {"failed", 0.0}}});
    r.per_step.push_back({0.25, {{"distance", std::numeric_limits<double>::quiet_NaN()}}});
    r.verdict = Verdict::fail;
    const auto doc = report_document(r);
    CHECK(doc.at("schema") == "shiftlab-report-v1");
    CHECK(doc.at("verdict") == "fail");
    CHECK(doc.at("per_step").size() == 2);
    const auto text = canonical_dump(doc);
    CHECK(text.find("\"fitted_slope\":null") != std::string::npos);
    CHECK(steps_csv(r) == "epsilon,distance,failed\n0.5,0.25,0\n0.25,nan,nan\n");
}
