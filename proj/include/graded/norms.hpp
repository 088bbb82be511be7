#pragma once

#include <graded/vec.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace graded {

/// Thrown when an iterative solver cannot certify the requested tolerance.
struct SolverFailure : std::runtime_error {
    SolverFailure(const std::string &what, double gap)
        : std::runtime_error(what), achieved_gap(gap) {}
    double achieved_gap;
};

/// Exponent of an lp norm. Infinity is a distinguished state so formulas
/// never see a float sentinel.
class PNorm {
  public:
    /// Finite exponent, requires p >= 1.
    static PNorm finite(double p);
    static PNorm inf() { return PNorm(0.0, true); }

    bool is_inf() const { return inf_; }
    /// Finite exponent value; throws std::logic_error when infinite.
    double value() const;
    /// Conjugate exponent: 1 <-> inf, otherwise p/(p-1).
    PNorm conjugate() const;

    bool operator==(const PNorm &) const = default;

  private:
    PNorm(double p, bool inf) : p_(p), inf_(inf) {}
    double p_;
    bool inf_;
};

enum class NormKind { lp, weighted_lp, atomic };

/// Tri-state property claims. Unset means unknown.
struct NormFlags {
    std::optional<bool> permutation_invariant;
    std::optional<bool> monotonic;
    std::optional<bool> orthant_monotonic;
    std::optional<bool> orthant_strictly_monotonic;
    std::optional<bool> strictly_convex;
};

/// Description of a source norm: lp(p), weighted lp (positive weights), or
/// the gauge of the convex hull of a finite symmetric atom set.
class NormSpec {
  public:
    static NormSpec lp(PNorm p);
    /// All weights strictly positive and finite.
    static NormSpec weighted_lp(PNorm p, Vec w);
    /// Atoms are closed under negation at construction, must be nonzero,
    /// share one dimension d <= 8, and span R^d (so the gauge is a norm).
    static NormSpec atomic(std::vector<Vec> atoms);

    NormKind kind() const { return kind_; }
    const PNorm &p() const;
    const Vec &weights() const;
    /// Atom list after symmetric closure and exact-duplicate removal.
    const std::vector<Vec> &atoms() const;
    /// Ambient dimension when the spec pins one (weighted_lp, atomic).
    std::optional<int> dim() const;

    /// Caller-declared claims; verified by the properties module, never
    /// silently assumed by evaluators.
    NormFlags declared;

    /// Effective flags: derived facts for the lp families (which override
    /// any declaration), pass-through of `declared` for atomic specs.
    NormFlags flags() const;

  private:
    NormSpec() : p_(PNorm::finite(2)) {}
    NormKind kind_ = NormKind::lp;
    PNorm p_;
    Vec w_;
    std::vector<Vec> atoms_;
};

/// A Hoelder pair: <u,v> = eval(u) * dual_eval(v) up to `gap` >= 0.
struct DualPair {
    Vec u, v;
    double gap;
};

/// ||x|| under the source norm. Atomic specs solve the exact gauge LP
/// min{sum lambda : x = sum lambda_i a_i, lambda >= 0}.
double eval(const NormSpec &n, const Vec &x);
/// Dual norm sup{<x,y> : ||x|| <= 1}; analytic conjugate exponent for the
/// lp families, max over atoms for atomic specs.
double dual_eval(const NormSpec &n, const Vec &y);
/// (||.||*)* at x, evaluated by maximizing <x,y> over the dual unit ball
/// rather than reusing eval(); agrees with eval() up to tolerance.
double bidual_eval(const NormSpec &n, const Vec &x);
/// K-restriction norm; requires support(x) within K.
double restrict_eval(const NormSpec &n, const Vec &x, const IndexSet &K);
/// Restriction of the dual norm to F_K; requires support(y) within K.
double star_k_eval(const NormSpec &n, const Vec &y, const IndexSet &K);
/// Dual of the K-restriction norm: sup{<x,y> : x in F_K, ||x|| <= 1};
/// requires support(y) within K.
double k_star_eval(const NormSpec &n, const Vec &y, const IndexSet &K);

/// Analytic Hoelder-equality mate for lp / weighted lp sources (u != 0):
/// p=1: v = sign(u); p in (1,inf): v = sign(u) .* |u|^(p-1); p=inf:
/// v = sign(u) on the argmax set of |u| (an l-inf dual mate must live on
/// the argmax). Weighted specs go through the w-scaled recipe.
DualPair dual_pair_construct(const NormSpec &n, const Vec &u);
/// Maximizer of <u,.> over the dual unit ball, normalized to dual norm 1.
/// lp families delegate to the construction; atomic specs solve the polar
/// polytope LP (the optimum is a polar vertex). Certifies gap <= tol * scale.
DualPair dual_pair_search(const NormSpec &n, const Vec &u, double tol = 1e-8);

} // namespace graded
