#pragma once

#include <graded/vec.hpp>

#include <vector>

namespace graded {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status;
    Vec x;            ///< primal solution in the original variables
    double objective; ///< c'x at the solution (meaningful when optimal)
};

/// Minimize c'x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0.
/// Dense two-phase tableau simplex with a Bland anti-cycling fallback;
/// sized for desk-scale problems (hundreds of rows).
LpResult solve_lp(const Vec &c, const std::vector<Vec> &A_ub, const Vec &b_ub,
                  const std::vector<Vec> &A_eq, const Vec &b_eq);

/// Same problem with sign-unrestricted variables (internally split x+ - x-).
LpResult solve_lp_free(const Vec &c, const std::vector<Vec> &A_ub,
                       const Vec &b_ub, const std::vector<Vec> &A_eq,
                       const Vec &b_eq);

} // namespace graded
