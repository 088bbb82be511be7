#pragma once

#include <graded/norms.hpp>
#include <graded/vec.hpp>

namespace graded {

/// Euclidean projection of u onto {z : ||w .* z||_p <= t}, t > 0.
/// p = 1 uses the sorted-breakpoint threshold scan, p = inf clips, and
/// finite p > 1 runs a safeguarded Newton iteration on the KKT multiplier.
Vec proj_weighted_lp_ball(const Vec &u, const Vec &w, const PNorm &p,
                          double t);

/// Plain lp ball: weights all one.
Vec proj_lp_ball(const Vec &u, const PNorm &p, double t);

} // namespace graded
