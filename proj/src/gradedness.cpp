#include <graded/gradedness.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace graded {

namespace {

bool exactly_zero(const Vec &x) {
    return std::all_of(x.begin(), x.end(), [](double t) { return t == 0.0; });
}

/// A norm chain plus the band its entries are trusted to.
struct Chain {
    NormSequenceReport report;
    StationarityTol band;
};

Chain topk_chain(const NormSpec &source, const Vec &x) {
    return {topk_sequence(source, x), StationarityTol{1e-10, analytic_rtol}};
}

// Mirrors ksupport_sequence but keeps the band it settled on: any
// solver-bracketed entry widens the comparison to solver_rtol(tol).
Chain ksupport_chain(const NormSpec &source, const Vec &y, double tol) {
    const int d = static_cast<int>(y.size());
    Vec values(static_cast<std::size_t>(d));
    bool analytic_only = true;
    for (int k = 1; k <= d; ++k) {
        const KSupportResult r =
            ksupport_eval_detail(source, k, y, KSupportMethod::automatic, tol);
        values[static_cast<std::size_t>(k - 1)] = r.value;
        if (r.method != KSupportMethod::analytic && r.upper != r.lower)
            analytic_only = false;
    }
    const StationarityTol band{
        1e-10, analytic_only ? analytic_rtol : solver_rtol(tol)};
    return {make_sequence_report(std::move(values),
                                 SeqDirection::nonincreasing, band),
            band};
}

Chain build_chain(const NormSpec &source, const Vec &x, GradedDirection dir,
                  double tol) {
    return dir == GradedDirection::increasing ? topk_chain(source, x)
                                              : ksupport_chain(source, x, tol);
}

// Whether the chain already sits at its final value at level l in [0, d].
// Level 0 stands for the zero vector: its chain is identically zero, so the
// test degenerates to |v_d| <= atol in both directions.
bool flat_at(const Vec &v, int l, const StationarityTol &st) {
    const double vd = v.back();
    if (l == 0)
        return std::abs(vd) <= st.atol;
    return st.equal(v[static_cast<std::size_t>(l - 1)], vd, vd);
}

int recovered_level(const Vec &v, const StationarityTol &st) {
    const int d = static_cast<int>(v.size());
    for (int l = 0; l <= d; ++l)
        if (flat_at(v, l, st))
            return l;
    return d;  // unreachable: level d is an exact tie
}

// Chain shape anchored at level l: ordered prefix, constant tail from
// position l, and (strict only) a band-visible jump into position l. The
// jump out of level 0 means "the chain is not the zero chain"; for
// decreasing chains the value above position 1 is conceptually infinite,
// which the same predicate captures.
bool shape_at(const Vec &v, int l, bool strict, GradedDirection dir,
              const StationarityTol &st) {
    const int d = static_cast<int>(v.size());
    const double vd = v.back();
    const double band = std::max(st.atol, st.rtol * std::abs(vd));
    const bool increasing = dir == GradedDirection::increasing;

    if (l == 0 && std::abs(vd) > st.atol)
        return false;
    for (int k = std::max(l, 1); k <= d; ++k)
        if (!flat_at(v, k, st))
            return false;
    for (int k = 1; k <= l - 2; ++k) {
        const double lo = v[static_cast<std::size_t>(k - 1)];
        const double hi = v[static_cast<std::size_t>(k)];
        if (increasing ? hi < lo - band : hi > lo + band)
            return false;
    }
    if (l >= 2) {
        const double at = v[static_cast<std::size_t>(l - 1)];
        const double before = v[static_cast<std::size_t>(l - 2)];
        const double step = increasing ? at - before : before - at;
        if (strict ? step <= band : step < -band)
            return false;
    } else if (l == 1 && strict && std::abs(vd) <= st.atol) {
        return false;
    }
    return true;
}

struct FormCheck {
    bool ok_a = false;
    bool ok_b = false;
    bool ok_c = false;
    int recovered = 0;
    bool all_ok() const { return ok_a && ok_b && ok_c; }
};

FormCheck evaluate_forms(const Vec &v, int s, bool strict, GradedDirection dir,
                         const NormSequenceReport &rep,
                         const StationarityTol &st) {
    const int d = static_cast<int>(v.size());
    FormCheck fc;
    fc.recovered = recovered_level(v, st);

    // (a) the shape holds at l0; the strict form is an equivalence, so the
    // shape must also hold at no other level.
    bool a = shape_at(v, s, strict, dir, st);
    if (strict && a)
        for (int l = 0; l <= d && a; ++l)
            if (l != s && shape_at(v, l, true, dir, st))
                a = false;
    fc.ok_a = a;

    // (b) monotone chain plus the level implication (equivalence if strict).
    bool b = rep.monotone_ok;
    for (int l = 0; l <= d && b; ++l) {
        const bool lhs = s <= l;
        const bool rhs = flat_at(v, l, st);
        if (strict ? lhs != rhs : (lhs && !rhs))
            b = false;
    }
    fc.ok_b = b;

    // (c) monotone chain plus the min-index identity.
    fc.ok_c =
        rep.monotone_ok && (strict ? s == fc.recovered : s >= fc.recovered);
    return fc;
}

std::vector<Vec> canonical_probes(int d) {
    std::vector<Vec> probes;
    probes.emplace_back(static_cast<std::size_t>(d), 0.0);
    Vec spike(static_cast<std::size_t>(d), 0.0);
    spike[0] = 2.0;
    probes.push_back(std::move(spike));
    probes.emplace_back(static_cast<std::size_t>(d), 1.0);
    if (d >= 2)
        for (const double eps : {0.1, 0.5, 0.9}) {
            Vec y(static_cast<std::size_t>(d), eps / (d - 1));
            y.back() = 1.0;
            probes.push_back(std::move(y));
        }
    return probes;
}

// Support of size s chosen uniformly; entries signed-uniform with magnitude
// in [0.1, 10], keeping every chain comparison far from the band.
Vec planted_vector(std::mt19937_64 &rng, int d, int s) {
    std::vector<int> idx(static_cast<std::size_t>(d));
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::uniform_real_distribution<double> mag(0.1, 10.0);
    std::bernoulli_distribution flip(0.5);
    Vec x(static_cast<std::size_t>(d), 0.0);
    for (int j = 0; j < s; ++j)
        x[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])] =
            (flip(rng) ? -1.0 : 1.0) * mag(rng);
    return x;
}

}  // namespace

std::string to_string(GradedDirection dir) {
    return dir == GradedDirection::increasing ? "increasing" : "decreasing";
}

int l0_from_topk(const NormSpec &source, const Vec &x, double tol) {
    if (tol <= 0.0)
        throw std::invalid_argument("tol must be positive");
    check_finite(x);
    if (x.empty())
        throw std::invalid_argument("x must be nonempty");
    if (exactly_zero(x))
        return 0;
    const NormSequenceReport rep = topk_sequence(source, x);
    return make_sequence_report(rep.values, SeqDirection::nondecreasing,
                                StationarityTol{1e-10, tol})
        .stationary_from;
}

int l0_from_ksupport(const NormSpec &source, const Vec &y, double tol) {
    check_finite(y);
    if (y.empty())
        throw std::invalid_argument("y must be nonempty");
    if (exactly_zero(y))
        return 0;
    const Chain ch = ksupport_chain(source, y, tol);
    const double dstar = dual_eval(source, y);
    const int d = static_cast<int>(y.size());
    for (int k = 1; k <= d; ++k)
        if (ch.band.equal(ch.report.values[static_cast<std::size_t>(k - 1)],
                          dstar, dstar))
            return k;
    return d;
}

bool dc_level_membership(const NormSpec &source, const Vec &x, int k,
                         double tol) {
    if (tol <= 0.0)
        throw std::invalid_argument("tol must be positive");
    check_finite(x);
    const int d = static_cast<int>(x.size());
    if (d == 0)
        throw std::invalid_argument("x must be nonempty");
    if (k < 0 || k > d)
        throw std::invalid_argument("k must lie in [0, d]");
    const StationarityTol st{1e-10, tol};
    const double full = eval(source, x);
    if (k == 0)
        return full <= st.atol;
    const double tk = topk_eval(source, k, x);
    return full <= tk + std::max(st.atol, st.rtol * std::abs(full));
}

GradednessVerdict classify_gradedness(const NormSpec &source, int dim,
                                      GradedDirection direction, bool strict,
                                      int trials, std::uint64_t seed,
                                      double tol) {
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    if (tol <= 0.0)
        throw std::invalid_argument("tol must be positive");
    const int d = resolve_check_dim(source, dim);

    GradednessVerdict out{};
    out.direction = direction;
    out.strict = strict;
    out.holds_for_vector = true;

    const auto consider = [&](const Vec &x) {
        const Chain ch = build_chain(source, x, direction, tol);
        const FormCheck fc = evaluate_forms(ch.report.values, l0(x), strict,
                                            direction, ch.report, ch.band);
        out.l0_true = l0(x);
        out.l0_recovered = fc.recovered;
        out.sequence = ch.report;
        out.x = x;
        return fc.all_ok();
    };

    for (const Vec &probe : canonical_probes(d))
        if (!consider(probe)) {
            out.holds_for_vector = false;
            return out;
        }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> sparsity(0, d);
    for (int t = 0; t < trials; ++t)
        if (!consider(planted_vector(rng, d, sparsity(rng)))) {
            out.holds_for_vector = false;
            return out;
        }
    return out;
}

PropertyReport check_level_set_sphere_identity(const NormSpec &source, int dim,
                                               int k, int trials,
                                               std::uint64_t seed,
                                               double tol) {
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    if (tol <= 0.0)
        throw std::invalid_argument("tol must be positive");
    const int d = resolve_check_dim(source, dim);
    if (k < 1 || k > d)
        throw std::invalid_argument("k must lie in [1, d]");

    PropertyReport rpt;
    rpt.property = "level_set_sphere_identity";
    rpt.verdict = Verdict::passed;
    rpt.seed = seed;
    rpt.margin = std::numeric_limits<double>::infinity();

    const double band = 10.0 * tol;

    // Returns false once the membership equivalence breaks.
    const auto test_point = [&](const Vec &raw) {
        const double dn = dual_eval(source, raw);
        if (dn <= 0.0)
            return true;  // not normalizable onto the sphere
        Vec yhat = raw;
        for (double &t : yhat)
            t /= dn;
        ++rpt.trials;
        const int s = l0(raw);
        const double value =
            ksupport_eval(source, k, yhat, KSupportMethod::automatic, tol);
        const bool member = value <= 1.0 + band;
        const bool sparse = s <= k;
        if (member == sparse) {
            rpt.margin = std::min(rpt.margin, std::abs(value - (1.0 + band)));
            return true;
        }
        PropertyWitness wit;
        wit.vectors.emplace_back("y", raw);
        wit.vectors.emplace_back("y_hat", yhat);
        wit.note = member
                       ? "sphere point inside the k-support ball with l0 > k"
                       : "planted sparse sphere point left the k-support ball";
        wit.margin = member ? (1.0 + band) - value : value - (1.0 + band);
        rpt.margin = wit.margin;
        rpt.witness = std::move(wit);
        rpt.verdict = Verdict::falsified;
        return false;
    };

    std::vector<Vec> probes;
    for (int s = 1; s <= d; ++s) {
        Vec y(static_cast<std::size_t>(d), 0.0);
        for (int i = 0; i < s; ++i)
            y[static_cast<std::size_t>(i)] = (i % 2 != 0) ? -1.0 : 1.0;
        probes.push_back(std::move(y));
    }
    if (d >= 2)
        for (const double eps : {0.1, 0.5, 0.9}) {
            Vec y(static_cast<std::size_t>(d), eps / (d - 1));
            y.back() = 1.0;
            probes.push_back(std::move(y));
        }

    for (const Vec &p : probes)
        if (!test_point(p))
            return rpt;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> sparsity(1, d);
    for (int t = 0; t < trials; ++t)
        if (!test_point(planted_vector(rng, d, sparsity(rng))))
            return rpt;
    return rpt;
}

}  // namespace graded
