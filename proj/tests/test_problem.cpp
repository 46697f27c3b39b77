#include "doctest.h"
#include "germ/problem.hpp"
#include "germ/report.hpp"
#include "oracles.hpp"

using namespace germ;

TEST_CASE("catalog: the six builtin problems") {
    const std::vector<std::string> names = catalog_names();
    REQUIRE(names.size() == 6);
    CHECK(names == std::vector<std::string>{"circle", "exp", "affine", "poly2x2", "mixed-abs",
                                            "sindiff"});
    const ProblemFile& circle = catalog_entry("circle");
    CHECK(circle.dims == Dims{0, 1, 1});
    CHECK(circle.expressions[0] == "t1^2 + y1^2 - 1");
    CHECK_THROWS_AS(catalog_entry("nope"), Error);
}

TEST_CASE("problem files round-trip losslessly") {
    for (const std::string& name : catalog_names()) {
        const ProblemFile& pf = catalog_entry(name);
        const std::string text = serialize_problem_file(pf);
        const ProblemFile reparsed = parse_problem_file(text);
        CHECK(reparsed == pf);
        CHECK(serialize_problem_file(reparsed) == text);
    }
}

TEST_CASE("problem file parsing: errors carry line context") {
    CHECK_THROWS_AS(parse_problem_file("name = x\n"), Error);       // missing n
    CHECK_THROWS_AS(parse_problem_file("q = 0\nbogus\n"), Error);   // not key=value
    CHECK_THROWS_AS(parse_problem_file("n = 1\nname = a\nvars = sin, y1\n"
                                       "[expressions]\ny1\n[seed]\nb = 0\nc = 0\n"),
                    Error);  // function-name collision
    CHECK_THROWS_AS(parse_problem_file("n = 1\nname = a\nvars = z1\n"
                                       "[expressions]\nz1\n[seed]\nb = 0\nc = 0\n"),
                    Error);  // reserved oracle name
}

TEST_CASE("problem file: defaults and overrides") {
    const char* text =
        "name = sample\n"
        "q = 1\n"
        "m = 1\n"
        "n = 1\n"
        "[expressions]\n"
        "y1 - s1 - t1\n"
        "[seed]\n"
        "a = 0\n"
        "d = 0\n"
        "b = 0\n"
        "c = 0\n"
        "[solver]\n"
        "tol_res = 1e-12\n"
        "max_iters = 50\n";
    ProblemFile pf = parse_problem_file(text);
    CHECK(pf.var_names == std::vector<std::string>{"s1", "t1", "y1"});  // generated
    SolverConfig cfg = apply_overrides(pf.solver, SolverConfig{});
    CHECK(cfg.tol_res == 1e-12);
    CHECK(cfg.max_newton_iters == 50);
    CHECK(cfg.rcond_min == SolverConfig{}.rcond_min);
    CHECK(default_check_radii(pf) == Vec{0.1, 0.1, 0.1});
}

TEST_CASE("oracle expressions evaluate over x-names and z1..zn") {
    auto oracle = build_oracle(catalog_entry("circle"));
    REQUIRE(oracle != nullptr);
    CHECK(oracle({0.6}, {0.0})[0] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(build_oracle(catalog_entry("sindiff")) == nullptr);

    auto poly = build_oracle(catalog_entry("poly2x2"));
    Vec y = poly({8.0}, {0.0, 0.0});
    CHECK(y[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("load_problem: catalog prefix and filesystem") {
    ProblemFile pf = load_problem("catalog:exp");
    CHECK(pf.name == "exp");
    CHECK_THROWS_AS(load_problem("catalog:missing"), Error);
    CHECK_THROWS_AS(load_problem("/no/such/file.germ"), Error);
}

TEST_CASE("format_double: 17 significant digits, round-trippable") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-0.0) == "-0");
    const double v = 0.12345678901234567;
    CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("JsonWriter: structure and escaping") {
    JsonWriter w;
    w.begin_object();
    w.key("name").value(std::string_view("a\"b"));
    w.key("values").value(Vec{1.0, 0.5});
    w.key("flag").value(true);
    w.key("count").value(3);
    w.key("missing").value(std::numeric_limits<double>::infinity());
    w.end_object();
    CHECK(w.str() ==
          "{\"name\": \"a\\\"b\", \"values\": [1, 0.5], \"flag\": true, "
          "\"count\": 3, \"missing\": null}");
}

TEST_CASE("CsvWriter: fixed field formatting") {
    CsvWriter w;
    w.field("x1");
    w.field("status");
    w.end_row();
    w.field(0.25);
    w.field("ok");
    w.end_row();
    CHECK(w.str() == "x1,status\n0.25,ok\n");
}

TEST_CASE("build_spec: evaluator matches the expressions") {
    FunctionSpec mixed = build_spec(catalog_entry("mixed-abs"));
    CHECK(mixed.dims == Dims{1, 1, 1});
    CHECK_FALSE(mixed.differentiable_in_s);
    CHECK(eval_f(mixed, {-0.5, 0.5, 1.0})[0] == doctest::Approx(0.25).epsilon(1e-15));
}
