#pragma once

#include <graded/norms.hpp>
#include <graded/vec.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace graded {

enum class Verdict { passed, falsified, inconclusive };
std::string to_string(Verdict v);

/// Evaluator signature accepted by the sampling checkers, so derived norms
/// (e.g. top-k wrappers) can be probed without a NormSpec.
using NormFn = std::function<double(const Vec &)>;

/// Inputs that violated (or failed to decide) a property, replayable against
/// the same norm. Margin is the measured violation: positive overshoot for
/// tolerance properties, the (non-positive) gap magnitude for strict ones.
struct PropertyWitness {
    std::vector<std::pair<std::string, Vec>> vectors;
    std::vector<std::pair<std::string, std::vector<int>>> index_sets;
    std::string note;
    double margin = 0.0;
};

struct PropertyReport {
    std::string property;
    Verdict verdict = Verdict::inconclusive;
    int trials = 0;                ///< executed trial count (probes included)
    std::uint64_t seed = 0;
    std::optional<PropertyWitness> witness;
    /// Falsified: violation magnitude. Passed: smallest slack seen.
    double margin = 0.0;
};

/// Dimension to sample at: must match the spec's pinned dimension when there
/// is one; required (>= 1) for dimension-free sources.
int resolve_check_dim(const NormSpec &n, int dim);

/// Monotonicity: |x| <= |x'| componentwise implies f(x) <= f(x'), within
/// tol * f(x'). Canonical shrink probes run before the seeded random trials.
PropertyReport check_monotonic(const NormFn &f, int dim, int trials,
                               std::uint64_t seed, double tol = 1e-9);
PropertyReport check_monotonic(const NormSpec &n, int dim, int trials,
                               std::uint64_t seed, double tol = 1e-9);

/// Orthant monotonicity, two required sub-tests: same-orthant shrink pairs
/// and nested coordinate-subspace projections.
PropertyReport check_orthant_monotonic(const NormFn &f, int dim, int trials,
                                       std::uint64_t seed, double tol = 1e-9);
PropertyReport check_orthant_monotonic(const NormSpec &n, int dim, int trials,
                                       std::uint64_t seed, double tol = 1e-9);

/// Strict variant: zero-tolerance comparison; a trial falsifies only on an
/// exact tie or reversal at floating precision. `margin` must be positive and
/// is recorded with the report (strictness itself is not thresholded).
PropertyReport check_orthant_strictly_monotonic(const NormFn &f, int dim,
                                                int trials, std::uint64_t seed,
                                                double margin = 1e-12);
PropertyReport check_orthant_strictly_monotonic(const NormSpec &n, int dim,
                                                int trials, std::uint64_t seed,
                                                double margin = 1e-12);

/// Birkhoff orthogonality of F_K to F_{-K}: ||u + v|| >= ||u|| for u
/// supported in K, v in the complement (strict: > for v != 0).
PropertyReport check_birkhoff(const NormFn &f, const IndexSet &K, int trials,
                              std::uint64_t seed, bool strict,
                              double tol = 1e-9);
PropertyReport check_birkhoff(const NormSpec &n, const IndexSet &K, int trials,
                              std::uint64_t seed, bool strict,
                              double tol = 1e-9);
/// Sweep over every nonempty K (dim <= 16); first falsified K wins.
PropertyReport check_birkhoff_all(const NormSpec &n, int dim, int trials,
                                  std::uint64_t seed, bool strict,
                                  double tol = 1e-9);

/// Existence of a dual pair sharing the support of u (same-orthant, gap
/// within tol). sup-norm families are decided analytically; atomic sources
/// run a certified LP search restricted to the support subspace, reporting
/// inconclusive when the search cannot separate a strict-support witness.
PropertyReport check_dual_pair_support(const NormSpec &n, int dim, int trials,
                                       std::uint64_t seed, double tol = 1e-9);

/// star-K (dual then restrict) versus K-star (restrict then dual) equality
/// on sampled (K, y) with y supported in K.
PropertyReport check_restriction_duality(const NormSpec &n, int dim,
                                         int trials, std::uint64_t seed,
                                         double tol = 1e-9);

/// Meta-check: an orthant-monotonic norm on a strictly convex space must be
/// orthant-strictly monotonic. Gated on the strict-convexity flag; reports
/// inconclusive when that precondition is absent.
PropertyReport check_om_rotund_implies_osm(const NormSpec &n, int dim,
                                           int trials, std::uint64_t seed);

} // namespace graded
