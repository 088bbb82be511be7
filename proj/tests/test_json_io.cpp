#include <doctest.h>

#include <graded/json_io.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

using namespace graded;

namespace {

// Files created relative to the test working directory; removed per case.
struct TempFile {
    std::string path;
    TempFile(std::string name, const std::string &contents)
        : path(std::move(name)) {
        std::ofstream out(path, std::ios::binary);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

Json schema(const char *name) {
    return load_json_file(std::string(SCHEMA_DIR) + "/" + name);
}

} // namespace

TEST_CASE("norm specs round-trip through json") {
    const NormSpec lp2 = NormSpec::lp(PNorm::finite(2.0));
    const Json j2 = to_json(lp2);
    CHECK(j2.at("kind") == "lp");
    CHECK(j2.at("p") == 2.0);
    const NormSpec back2 = norm_spec_from_json(j2);
    CHECK(eval(back2, {3.0, -4.0}) == doctest::Approx(5.0).epsilon(1e-15));

    const Json jinf = to_json(NormSpec::lp(PNorm::inf()));
    CHECK(jinf.at("p") == "inf");
    CHECK(norm_spec_from_json(jinf).p().is_inf());

    const NormSpec w = NormSpec::weighted_lp(PNorm::finite(1.0), {1.0, 2.0, 3.0});
    const Json jw = to_json(w);
    CHECK(jw.at("kind") == "weighted_lp");
    CHECK(jw.at("w") == Json::array({1.0, 2.0, 3.0}));
    CHECK(eval(norm_spec_from_json(jw), {1.0, 1.0, -1.0}) ==
          doctest::Approx(6.0).epsilon(1e-15));

    const NormSpec cross = NormSpec::atomic({{1.0, 0.0}, {0.0, 1.0}});
    const Json jc = to_json(cross);
    CHECK(jc.at("kind") == "atomic");
    CHECK(jc.at("atoms").size() == 4); // symmetric closure
    const NormSpec backc = norm_spec_from_json(jc);
    CHECK(eval(backc, {1.0, 1.0}) ==
          doctest::Approx(eval(cross, {1.0, 1.0})).epsilon(1e-12));

    // every round-tripped spec still matches the published schema
    for (const Json &doc : {j2, jinf, jw, jc})
        CHECK(matches_schema(doc, schema("norm_spec.schema.json")));
}

TEST_CASE("norm spec parsing rejects malformed documents") {
    CHECK_THROWS_AS(norm_spec_from_json(Json{{"p", 2.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(norm_spec_from_json(Json{{"kind", 7}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(norm_spec_from_json(Json{{"kind", "huh"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(norm_spec_from_json(Json{{"kind", "lp"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(norm_spec_from_json(Json{{"kind", "lp"}, {"p", "two"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(norm_spec_from_json(Json{{"kind", "lp"}, {"p", 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        norm_spec_from_json(Json{{"kind", "weighted_lp"}, {"p", 2.0}}),
        std::invalid_argument);
    CHECK_THROWS_AS(norm_spec_from_json(Json{{"kind", "weighted_lp"},
                                             {"p", 2.0},
                                             {"w", Json::array({1.0, "x"})}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        norm_spec_from_json(Json{{"kind", "atomic"}, {"atoms", 3}}),
        std::invalid_argument);
}

TEST_CASE("compact source strings cover all three kinds") {
    CHECK(eval(parse_source("lp:2"), {3.0, 4.0}) ==
          doctest::Approx(5.0).epsilon(1e-15));
    CHECK(eval(parse_source("lp:inf"), {3.0, -4.0}) == 4.0);
    CHECK(parse_source("lp:1.5").p().value() == 1.5);

    const NormSpec w = parse_source("wlp:2:[1,4]");
    CHECK(w.kind() == NormKind::weighted_lp);
    CHECK(w.weights() == Vec{1.0, 4.0});

    const NormSpec inline_atoms = parse_source("atomic:[[1,0],[0,1]]");
    CHECK(eval(inline_atoms, {1.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-12));

    const TempFile f("tmp_atoms_io.json", "[[1,0],[0,1]]");
    const NormSpec from_file = parse_source("atomic:@" + f.path);
    CHECK(eval(from_file, {1.0, 1.0}) ==
          doctest::Approx(eval(inline_atoms, {1.0, 1.0})).epsilon(1e-15));
}

TEST_CASE("malformed source strings throw with the offending text") {
    for (const char *bad :
         {"lp", "lp:abc", "lp:2x", "lp:0.5", "wlp:2", "wlp:2:notjson",
          "atomic:{\"a\":1}", "atomic:[[1,0],[0,\"x\"]]",
          "atomic:@/nonexistent/atoms.json", "huh:3", ":2"})
        CHECK_THROWS_AS(parse_source(bad), std::invalid_argument);
}

TEST_CASE("vectors parse from inline json") {
    CHECK(parse_vector("[1, 2.5, -3]") == Vec{1.0, 2.5, -3.0});
    CHECK(parse_vector("[]").empty());
    CHECK_THROWS_AS(parse_vector("nope"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vector("[1,\"a\"]"), std::invalid_argument);
    CHECK_THROWS_AS(parse_vector("{\"x\":1}"), std::invalid_argument);
}

TEST_CASE("vector files accept json arrays and csv rows") {
    {
        const TempFile f("tmp_vecs_single.json", " [1, 2, 3]");
        const auto vs = load_vectors(f.path);
        REQUIRE(vs.size() == 1);
        CHECK(vs[0] == Vec{1.0, 2.0, 3.0});
    }
    {
        const TempFile f("tmp_vecs_matrix.json", "[[1,2],[3,4],[5,6]]");
        const auto vs = load_vectors(f.path);
        REQUIRE(vs.size() == 3);
        CHECK(vs[2] == Vec{5.0, 6.0});
    }
    {
        const TempFile f("tmp_vecs.csv", "1, 2 ,3\n\n-4,5e-1,6\n");
        const auto vs = load_vectors(f.path);
        REQUIRE(vs.size() == 2);
        CHECK(vs[0] == Vec{1.0, 2.0, 3.0});
        CHECK(vs[1] == Vec{-4.0, 0.5, 6.0});
    }
    {
        const TempFile f("tmp_vecs_bad.csv", "1,x,3\n");
        CHECK_THROWS_AS(load_vectors(f.path), std::invalid_argument);
    }
    {
        const TempFile f("tmp_vecs_empty.csv", "  \n \n");
        CHECK_THROWS_AS(load_vectors(f.path), std::invalid_argument);
    }
    {
        const TempFile f("tmp_vecs_emptyarr.json", "[]");
        CHECK_THROWS_AS(load_vectors(f.path), std::invalid_argument);
    }
    CHECK_THROWS_AS(load_vectors("no_such_file.csv"), std::invalid_argument);
}

TEST_CASE("index sets serialize one-based") {
    CHECK(index_set_to_json(IndexSet(5, {0, 2, 4})) == Json::array({1, 3, 5}));
    CHECK(index_set_to_json(IndexSet::empty(3)) == Json::array());
}

TEST_CASE("sequence reports carry both chains and validate") {
    const Json rep =
        sequence_report_json(NormSpec::lp(PNorm::finite(1.0)), {3.0, -1.0, 2.0});
    CHECK(rep.at("topk") == Json::array({3.0, 5.0, 6.0}));
    CHECK(rep.at("ksupport") == Json::array({6.0, 3.0, 3.0}));
    CHECK(rep.at("stationary_from") == 3);
    CHECK(rep.at("l0") == 3);
    CHECK(rep.at("x") == Json::array({3.0, -1.0, 2.0}));
    std::string err;
    CHECK(matches_schema(rep, schema("sequence_report.schema.json"), &err));
    CHECK(err.empty());
}

TEST_CASE("property reports validate with and without witnesses") {
    const NormSpec linf = NormSpec::lp(PNorm::inf());
    const Json bad =
        to_json(check_orthant_strictly_monotonic(linf, 3, 20, 7));
    CHECK(bad.at("verdict") == "falsified");
    REQUIRE(bad.at("witness").is_object());
    CHECK(bad.at("witness").at("vectors").size() == 2);
    CHECK(matches_schema(bad, schema("property_report.schema.json")));

    const Json good =
        to_json(check_orthant_monotonic(NormSpec::lp(PNorm::finite(2.0)), 3,
                                        20, 7));
    CHECK(good.at("verdict") == "passed");
    CHECK(good.at("witness").is_null());
    CHECK(matches_schema(good, schema("property_report.schema.json")));
}

TEST_CASE("gradedness reports bundle recovery routes and level memberships") {
    const Json rep = gradedness_report_json(NormSpec::lp(PNorm::finite(2.0)),
                                            {0.0, 3.0, 0.0, -1.0},
                                            GradedDirection::increasing, true,
                                            10, 3);
    CHECK(rep.at("l0") == 2);
    CHECK(rep.at("l0_topk") == 2);
    CHECK(rep.at("l0_ksupport") == 2);
    CHECK(rep.at("dc") == Json::array({false, false, true, true, true}));
    CHECK(rep.at("verdict").at("holds_for_vector") == true);
    std::string err;
    CHECK(matches_schema(rep, schema("gradedness_report.schema.json"), &err));
    CHECK(err.empty());
}

TEST_CASE("handwritten value reports match the published schema") {
    const Json doc{{"command", "ksupport"},
                   {"source", to_json(NormSpec::lp(PNorm::finite(2.0)))},
                   {"x", Json::array({1.0, 2.0})},
                   {"k", 1},
                   {"value", 2.23606797749979}};
    CHECK(matches_schema(doc, schema("value_report.schema.json")));
    Json null_k = doc;
    null_k["k"] = nullptr;
    null_k["command"] = "eval";
    CHECK(matches_schema(null_k, schema("value_report.schema.json")));
    Json bad = doc;
    bad["command"] = "frobnicate";
    CHECK_FALSE(matches_schema(bad, schema("value_report.schema.json")));
}

TEST_CASE("the schema checker pinpoints structural violations") {
    const Json sch{{"type", "object"},
                   {"required", Json::array({"k", "a"})},
                   {"properties",
                    Json{{"k", Json{{"type", "integer"}}},
                         {"a",
                          Json{{"type", "array"},
                               {"items", Json{{"type", "number"}}}}},
                         {"mode",
                          Json{{"type", "string"},
                               {"enum", Json::array({"fast", "slow"})}}}}},
                   {"additionalProperties", false}};

    std::string err;
    CHECK(matches_schema(Json{{"k", 3}, {"a", Json::array({1.0, 2.0})}}, sch,
                         &err));

    CHECK_FALSE(matches_schema(Json{{"k", "oops"},
                                    {"a", Json::array()}},
                               sch, &err));
    CHECK(err == "$.k: type mismatch");

    CHECK_FALSE(matches_schema(Json{{"k", 3}}, sch, &err));
    CHECK(err == "$: missing required key a");

    CHECK_FALSE(matches_schema(Json{{"k", 3},
                                    {"a", Json::array({1.0, "x"})}},
                               sch, &err));
    CHECK(err == "$.a[1]: type mismatch");

    CHECK_FALSE(matches_schema(Json{{"k", 3},
                                    {"a", Json::array()},
                                    {"extra", 1}},
                               sch, &err));
    CHECK(err == "$: unexpected key extra");

    CHECK_FALSE(matches_schema(Json{{"k", 3},
                                    {"a", Json::array()},
                                    {"mode", "medium"}},
                               sch, &err));
    CHECK(err == "$.mode: value not in enum");

    // union types accept each branch and reject everything else
    const Json uni{{"type", Json::array({"integer", "null"})}};
    CHECK(matches_schema(Json(3), uni));
    CHECK(matches_schema(Json(nullptr), uni));
    CHECK_FALSE(matches_schema(Json(1.5), uni));

    CHECK_THROWS_AS(matches_schema(Json(3), Json{{"type", "quux"}}),
                    std::invalid_argument);
}
