#pragma once

#include <graded/norms.hpp>
#include <graded/vec.hpp>

#include <cmath>
#include <functional>

namespace graded {

/// Stationarity / chain comparison tolerance: two sequence entries count as
/// equal when |a - b| <= max(atol, rtol * scale) with scale the reference
/// (last) value of the sequence.
struct StationarityTol {
    double atol = 1e-10;
    double rtol = 1e-8;
    bool equal(double a, double b, double scale) const {
        double m = std::max(atol, rtol * std::abs(scale));
        return a >= b - m && a <= b + m;
    }
};

/// rtol for sequences built from analytic evaluations.
inline constexpr double analytic_rtol = 1e-8;
/// Optimized paths widen rtol to 100x the solver tolerance.
inline double solver_rtol(double solver_tol) { return 100.0 * solver_tol; }

enum class SeqDirection { nondecreasing, nonincreasing };

struct NormSequenceReport {
    Vec values;          ///< values[k-1] for k = 1..d
    int stationary_from; ///< smallest k whose value already equals values[d]
    bool monotone_ok;    ///< chain direction holds within tolerance
};

/// Builds the report fields from a raw value sequence.
NormSequenceReport make_sequence_report(Vec values, SeqDirection dir,
                                        StationarityTol tol);

/// Generalized top-k norm: sup over |K| <= k of ||project(x, K)||.
/// Sorted fast path when the source is intrinsically permutation-invariant
/// and monotonic; otherwise a subset sweep (refused for d > 20). The sweep
/// parallelizes over subset ranges, capped by GRADED_NORMS_THREADS.
double topk_eval(const NormSpec &source, int k, const Vec &x);

/// values[k] = topk_eval(k) for k = 1..d, single sweep.
NormSequenceReport topk_sequence(const NormSpec &source, const Vec &x);

enum class KSupportMethod { automatic, analytic, dual_opt, gauge_decomp };

struct KSupportResult {
    double value;          ///< certified estimate (midpoint of the bracket)
    double lower, upper;   ///< certificate: lower <= true value <= upper
    KSupportMethod method; ///< method that actually ran
};

/// k-support norm (dual of the top-k norm) evaluated by:
///  - analytic: closed forms, lp(1) and lp(inf) sources only;
///  - dual_opt: cutting-plane maximization of <x,y> over the intersection
///    of the size-k subset-restriction balls, certified bracket;
///  - gauge_decomp: min sum_K ||v_K||_dual over decompositions y = sum v_K
///    with |K| = k (ADMM for lp families, one exact LP for atomic sources);
///    exact for orthant-monotonic sources.
/// `automatic` picks analytic when available, else dual_opt.
KSupportResult ksupport_eval_detail(const NormSpec &source, int k,
                                    const Vec &y,
                                    KSupportMethod method =
                                        KSupportMethod::automatic,
                                    double tol = 1e-8);

double ksupport_eval(const NormSpec &source, int k, const Vec &y,
                     KSupportMethod method = KSupportMethod::automatic,
                     double tol = 1e-8);

NormSequenceReport ksupport_sequence(const NormSpec &source, const Vec &y,
                                     KSupportMethod method =
                                         KSupportMethod::automatic,
                                     double tol = 1e-8);

bool topk_ball_contains(const NormSpec &source, int k, const Vec &x,
                        double tol = 1e-8);
bool ksupport_ball_contains(const NormSpec &source, int k, const Vec &y,
                            double tol = 1e-8);

/// Evaluator wrapper so property checkers can probe derived norms.
std::function<double(const Vec &)> topk_norm_fn(const NormSpec &source,
                                                int k);

} // namespace graded
