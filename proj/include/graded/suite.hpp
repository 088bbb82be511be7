#pragma once

#include <graded/json_io.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace graded {

struct SuiteOptions {
    bool quick = false; ///< reduced trial counts, same criteria set
    std::string filter; ///< substring over criterion names/tags; empty = all
    double tol = 1e-8;
    std::uint64_t seed = 42;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;
};

/// Runs the acceptance matrix: Table-1 closed forms, chain monotonicity,
/// planted-l0 recovery through both chains, the sup-norm necessity witness,
/// the near-flat counterexample family, the orthant-monotonicity
/// equivalence web, the rotundity meta-check, the bidual identity, and
/// solver cross-agreement. Criteria with pinned runtime budgets fail when
/// they exceed them.
std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions &opts);

bool suite_all_passed(const std::vector<CriterionResult> &results);

Json suite_report_json(const std::vector<CriterionResult> &results,
                       const SuiteOptions &opts);

} // namespace graded
