#include <doctest.h>

#include <graded/suite.hpp>

#include <stdexcept>
#include <vector>

using namespace graded;

namespace {

SuiteOptions quick_opts(const char *filter) {
    SuiteOptions o;
    o.quick = true;
    o.filter = filter;
    return o;
}

} // namespace

TEST_CASE("the filter selects criteria by name or tag, case-insensitively") {
    const auto flat = run_acceptance_suite(quick_opts("near-flat"));
    REQUIRE(flat.size() == 1);
    CHECK(flat[0].id == 6);
    CHECK(flat[0].passed);
    CHECK_FALSE(flat[0].detail.empty());

    const auto upper = run_acceptance_suite(quick_opts("NEAR-FLAT"));
    REQUIRE(upper.size() == 1);
    CHECK(upper[0].id == 6);

    const auto graded = run_acceptance_suite(quick_opts("gradedness"));
    std::vector<int> ids;
    for (const auto &r : graded)
        ids.push_back(r.id);
    CHECK(ids == std::vector<int>{3, 4, 5, 6});

    CHECK(run_acceptance_suite(quick_opts("zzz-no-such")).empty());
}

TEST_CASE("quick runs pass and report deterministic details") {
    const auto a = run_acceptance_suite(quick_opts("gradedness"));
    const auto b = run_acceptance_suite(quick_opts("gradedness"));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].passed);
        CHECK(a[i].detail == b[i].detail); // seconds may differ, text may not
        CHECK(a[i].seconds >= 0.0);
    }
    CHECK(suite_all_passed(a));
}

TEST_CASE("suite reports serialize to the published shape") {
    SuiteOptions o = quick_opts("bidual");
    const auto results = run_acceptance_suite(o);
    REQUIRE(results.size() == 1);
    const Json rep = suite_report_json(results, o);
    CHECK(rep.at("all_passed") == true);
    CHECK(rep.at("quick") == true);
    CHECK(rep.at("filter") == "bidual");
    REQUIRE(rep.at("criteria").size() == 1);
    CHECK(rep.at("criteria")[0].at("id") == 9);
    std::string err;
    CHECK(matches_schema(
        rep, load_json_file(std::string(SCHEMA_DIR) + "/suite_report.schema.json"),
        &err));
    CHECK(err.empty());
}

TEST_CASE("suite options are validated") {
    SuiteOptions o;
    o.tol = 0.0;
    CHECK_THROWS_AS(run_acceptance_suite(o), std::invalid_argument);
}
