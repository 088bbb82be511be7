#pragma once

#include <graded/norms.hpp>
#include <graded/properties.hpp>
#include <graded/topk.hpp>
#include <graded/vec.hpp>

#include <cstdint>
#include <string>

namespace graded {

enum class GradedDirection { increasing, decreasing };
std::string to_string(GradedDirection dir);

/// Outcome of classify_gradedness. `x`, `l0_true`, `l0_recovered` and
/// `sequence` describe the carried vector: the first counterexample when
/// holds_for_vector is false, otherwise the last vector tried.
///
/// Invariants: strict && holds_for_vector implies l0_recovered == l0_true;
/// without strictness the chain may flatten early, so l0_recovered <=
/// l0_true.
struct GradednessVerdict {
    GradedDirection direction;
    bool strict;
    bool holds_for_vector;
    int l0_true;
    int l0_recovered;
    NormSequenceReport sequence;
    Vec x;
};

/// Stationarity index of the top-k chain: smallest k whose value already
/// equals the full top-d value, 0 for x = 0. Recovers l0(x) exactly when
/// the source is orthant-strictly monotonic; otherwise only a lower bound
/// (the chain can flatten early, never late). `tol` is the relative
/// stationarity band.
int l0_from_topk(const NormSpec &source, const Vec &x,
                 double tol = analytic_rtol);

/// Smallest k whose k-support value meets dual_eval(y), 0 for y = 0.
/// Recovers l0(y) exactly when the source is orthant-monotonic and the
/// dual unit ball is rotund. `tol` is the solver tolerance; the comparison
/// band widens to solver_rtol(tol) whenever any chain entry comes from a
/// bracketing solver.
int l0_from_ksupport(const NormSpec &source, const Vec &y, double tol = 1e-8);

/// Level-set membership l0(x) <= k through the difference-of-norms form:
/// eval(x) <= topk_eval(k, x) within the stationarity band. k = 0 tests
/// membership in {0}. Agrees with l0(x) <= k exactly when the source is
/// orthant-strictly monotonic.
bool dc_level_membership(const NormSpec &source, const Vec &x, int k,
                         double tol = analytic_rtol);

/// Classifies the top-k chain (increasing) or the k-support chain
/// (decreasing) as (strictly) graded: per vector, the three equivalent
/// definition forms are evaluated independently --
///   (a) positional chain shape: monotone prefix, strict jump into
///       position l0, constant tail;
///   (b) for every level l, l0 <= l implies (iff, when strict) the chain
///       is already at its final value at position l;
///   (c) the min-index identity l0 >= (==) min{k : value_k = value_d};
/// all three must hold and agree, the first counterexample wins. Chains
/// extend below k = 1 with value 0 (increasing) or the zero-vector
/// membership predicate (decreasing), which settles x = 0. Canonical
/// probes (zero, spike, all-ones, the near-flat family
/// (eps/(d-1), ..., eps/(d-1), 1)) run before the seeded trials; trial
/// vectors carry planted sparsity with magnitudes in [0.1, 10].
GradednessVerdict classify_gradedness(const NormSpec &source, int dim,
                                      GradedDirection direction, bool strict,
                                      int trials, std::uint64_t seed,
                                      double tol = 1e-8);

/// Sphere-intersection identity: for y on the dual unit sphere,
/// l0(y) <= k iff the k-support value of y is <= 1. Planted-support points
/// probe the forward implication, dense and near-flat family points the
/// converse. Holds when the source is orthant-monotonic and the dual ball
/// is rotund; reports falsified with a witness otherwise.
PropertyReport check_level_set_sphere_identity(const NormSpec &source,
                                               int dim, int k, int trials,
                                               std::uint64_t seed,
                                               double tol = 1e-8);

} // namespace graded
