#include <graded/projections.hpp>
#include <graded/simplex.hpp>
#include <graded/topk.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

namespace graded {

namespace {

int thread_cap() {
    if (const char *s = std::getenv("GRADED_NORMS_THREADS")) {
        char *end        = nullptr;
        const long       v = std::strtol(s, &end, 10);
        if (end != s && v >= 1)
            return static_cast<int>(std::min(v, 64L));
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void require_k_range(int k, int d) {
    if (k < 1 || k > d)
        throw std::invalid_argument("k must lie in [1, dim]");
}

// Intrinsic structure only; declared flags on atomic sources are claims to be
// verified, not shortcuts to be taken.
bool has_sorted_fast_path(const NormSpec &n) {
    if (n.kind() == NormKind::lp)
        return true;
    if (n.kind() == NormKind::weighted_lp) {
        const Vec &w = n.weights();
        return std::all_of(w.begin(), w.end(),
                           [&](double wi) { return wi == w[0]; });
    }
    return false;
}

// Max of eval over the coordinate projections of every subset of size <= kmax,
// bucketed by subset size. Sizes with no admissible subset (only size 0) give 0.
Vec sweep_max_by_size(const NormSpec &n, const Vec &x, int kmax) {
    const int d = static_cast<int>(x.size());
    if (d > 20)
        throw std::invalid_argument(
            "subset sweep refused for dim > 20; source has no sorted fast path");

    const std::uint32_t nmask = std::uint32_t{1} << d;
    const auto eval_masks = [&](std::uint32_t lo, std::uint32_t hi, Vec &best) {
        Vec z(x.size());
        for (std::uint32_t m = lo; m < hi; ++m) {
            const int sz = std::popcount(m);
            if (sz == 0 || sz > kmax)
                continue;
            for (int i = 0; i < d; ++i)
                z[static_cast<std::size_t>(i)] =
                    (m >> i & 1u) ? x[static_cast<std::size_t>(i)] : 0.0;
            best[static_cast<std::size_t>(sz)] =
                std::max(best[static_cast<std::size_t>(sz)], eval(n, z));
        }
    };

    const int want = std::min<int>(thread_cap(), 8);
    if (nmask < (1u << 14) || want <= 1) {
        Vec best(static_cast<std::size_t>(kmax) + 1, 0.0);
        eval_masks(0, nmask, best);
        return best;
    }

    const int nt = want;
    std::vector<Vec> partial(static_cast<std::size_t>(nt),
                             Vec(static_cast<std::size_t>(kmax) + 1, 0.0));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    const std::uint32_t chunk = nmask / static_cast<std::uint32_t>(nt);
    for (int t = 0; t < nt; ++t) {
        const std::uint32_t lo = chunk * static_cast<std::uint32_t>(t);
        const std::uint32_t hi =
            (t == nt - 1) ? nmask : lo + chunk;
        pool.emplace_back(eval_masks, lo, hi,
                          std::ref(partial[static_cast<std::size_t>(t)]));
    }
    for (auto &th : pool)
        th.join();
    Vec best(static_cast<std::size_t>(kmax) + 1, 0.0);
    for (const Vec &p : partial)
        for (std::size_t s = 0; s < best.size(); ++s)
            best[s] = std::max(best[s], p[s]);
    return best;
}

// Value of the source on the top-j moduli, given |x| sorted descending.
double prefix_value(const NormSpec &n, const Vec &sorted_abs, int j) {
    Vec head(sorted_abs.begin(), sorted_abs.begin() + j);
    if (n.kind() == NormKind::weighted_lp)
        return n.weights()[0] * eval(NormSpec::lp(n.p()), head);
    return eval(NormSpec::lp(n.p()), head);
}

}  // namespace

NormSequenceReport make_sequence_report(Vec values, SeqDirection dir,
                                        StationarityTol tol) {
    if (values.empty())
        throw std::invalid_argument("empty value sequence");
    NormSequenceReport rep;
    const double tail    = values.back();
    const std::size_t d  = values.size();
    rep.values           = std::move(values);
    const Vec &vals      = rep.values;

    rep.monotone_ok = true;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        const double step = vals[i + 1] - vals[i];
        const double slack =
            std::max(tol.atol,
                     tol.rtol * std::max(std::abs(vals[i]), std::abs(vals[i + 1])));
        if (dir == SeqDirection::nondecreasing ? step < -slack : step > slack)
            rep.monotone_ok = false;
    }

    rep.stationary_from = static_cast<int>(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (tol.equal(vals[i], tail, tail)) {
            rep.stationary_from = static_cast<int>(i) + 1;
            break;
        }
    }
    return rep;
}

double topk_eval(const NormSpec &n, int k, const Vec &x) {
    check_finite(x);
    if (n.dim() && *n.dim() != static_cast<int>(x.size()))
        throw std::invalid_argument("dimension mismatch between source and x");
    require_k_range(k, static_cast<int>(x.size()));
    if (has_sorted_fast_path(n))
        return prefix_value(n, sorted_abs_desc(x), k);
    const Vec best = sweep_max_by_size(n, x, k);
    return *std::max_element(best.begin(), best.end());
}

NormSequenceReport topk_sequence(const NormSpec &n, const Vec &x) {
    check_finite(x);
    if (n.dim() && *n.dim() != static_cast<int>(x.size()))
        throw std::invalid_argument("dimension mismatch between source and x");
    const int d = static_cast<int>(x.size());
    if (d == 0)
        throw std::invalid_argument("x must be nonempty");

    Vec values(static_cast<std::size_t>(d));
    if (has_sorted_fast_path(n)) {
        const Vec a = sorted_abs_desc(x);
        for (int k = 1; k <= d; ++k)
            values[static_cast<std::size_t>(k - 1)] = prefix_value(n, a, k);
    } else {
        Vec best = sweep_max_by_size(n, x, d);
        double run = 0.0;
        for (int k = 1; k <= d; ++k) {
            run = std::max(run, best[static_cast<std::size_t>(k)]);
            values[static_cast<std::size_t>(k - 1)] = run;
        }
    }
    return make_sequence_report(values, SeqDirection::nondecreasing,
                                StationarityTol{1e-10, analytic_rtol});
}

namespace {

// ---------------------------------------------------------------------------
// Shared scaffolding for the two independent k-support solvers.

struct Reduced {
    NormSpec sub;   // source restricted to the surviving coordinates
    Vec y;          // surviving entries of the input
    int k;          // effective subset size, min(k, surviving dim)
    bool shortcut;  // k covers the whole reduced support: value = dual norm
};

// lp and weighted-lp sources are monotonic, so coordinates where y is exactly
// zero never help either solver and can be dropped up front. Atomic sources
// pass through untouched.
Reduced reduce_problem(const NormSpec &n, int k, const Vec &y) {
    if (n.kind() == NormKind::atomic) {
        const int d = static_cast<int>(y.size());
        return Reduced{n, y, k, k == d};
    }
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(y.size()); ++i)
        if (y[static_cast<std::size_t>(i)] != 0.0)
            keep.push_back(i);
    const IndexSet S(static_cast<int>(y.size()), keep);
    const Vec ys   = gather(y, S);
    const int dsub = static_cast<int>(ys.size());
    const int ksub = std::min(k, dsub);
    NormSpec sub   = n.kind() == NormKind::lp
                         ? NormSpec::lp(n.p())
                         : NormSpec::weighted_lp(n.p(), gather(n.weights(), S));
    return Reduced{std::move(sub), ys, ksub, ksub == dsub};
}

std::vector<std::uint32_t> masks_of_size(int d, int k) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 0; m < (std::uint32_t{1} << d); ++m)
        if (std::popcount(m) == k)
            out.push_back(m);
    return out;
}

// Sizes 1..k. Needed when the source may not be monotonic: a strict subset
// can then carry a larger restricted value than any size-k superset.
std::vector<std::uint32_t> masks_up_to_size(int d, int k) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 1; m < (std::uint32_t{1} << d); ++m)
        if (std::popcount(m) <= k)
            out.push_back(m);
    return out;
}

Vec masked(const Vec &x, std::uint32_t m) {
    Vec z(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        if (m >> i & 1u)
            z[i] = x[i];
    return z;
}

// sup over |K| = k of ||x_K|| for the reduced source. For permutation-invariant
// monotone sources this is the norm of the k largest moduli; otherwise a sweep.
double max_restricted(const NormSpec &sub, int k, const Vec &x,
                      const std::vector<std::uint32_t> &masks) {
    if (has_sorted_fast_path(sub))
        return prefix_value(sub, sorted_abs_desc(x), k);
    double best = 0.0;
    for (std::uint32_t m : masks)
        best = std::max(best, eval(sub, masked(x, m)));
    return best;
}

// ---------------------------------------------------------------------------
// dual_opt: maximize <x, y> subject to ||x_K|| <= 1 for every |K| = k.
//
// Cutting plane over an outer LP relaxation. Each violated restriction
// contributes the cut <w_K, x> <= 1 where w is a dual-pair partner of the
// restricted iterate (so <w_K, z> = ||z_K|| at the iterate and <w_K, x> <=
// ||x_K|| everywhere). The LP value bounds from above; rescaling the iterate
// onto the boundary bounds from below.

struct CutLp {
    std::vector<Vec> rows;  // <row, x> <= 1
    Vec obj;                // maximize <obj, x>
};

// Permutation-invariant case: restrict to the cone x_1 >= ... >= x_d >= 0
// against sorted |y|. There the binding restriction is always the leading
// prefix, so one smooth constraint replaces the whole subset family.
KSupportResult dual_opt_sorted_cone(const NormSpec &sub, int k, const Vec &ys,
                                    double tol) {
    const int d  = static_cast<int>(ys.size());
    Vec a        = sorted_abs_desc(ys);
    const PNorm p = sub.p();
    const PNorm q = p.conjugate();

    const auto prefix_norm = [&](const Vec &x) {
        Vec head(x.begin(), x.begin() + k);
        return eval(NormSpec::lp(p), head);
    };
    // Dual-mate direction of the leading prefix, normalized so the cut is
    // tight at z.
    const auto prefix_cut = [&](const Vec &z) {
        Vec w(static_cast<std::size_t>(d), 0.0);
        if (p.is_inf()) {
            int j = 0;
            for (int i = 1; i < k; ++i)
                if (z[static_cast<std::size_t>(i)] > z[static_cast<std::size_t>(j)])
                    j = i;
            w[static_cast<std::size_t>(j)] = 1.0;
            return w;
        }
        for (int i = 0; i < k; ++i)
            w[static_cast<std::size_t>(i)] =
                std::pow(std::abs(z[static_cast<std::size_t>(i)]), p.value() - 1.0);
        Vec head(w.begin(), w.begin() + k);
        const double s = eval(NormSpec::lp(q), head);
        for (double &wi : w)
            wi /= s;
        return w;
    };

    // LP over x >= 0: sortedness rows, x_1 <= 1 (single-coordinate restriction),
    // accumulated prefix cuts.
    std::vector<Vec> rows;
    std::vector<double> rhs;
    for (int i = 0; i + 1 < d; ++i) {
        Vec r(static_cast<std::size_t>(d), 0.0);
        r[static_cast<std::size_t>(i)]     = -1.0;
        r[static_cast<std::size_t>(i + 1)] = 1.0;
        rows.push_back(std::move(r));
        rhs.push_back(0.0);
    }
    {
        Vec r(static_cast<std::size_t>(d), 0.0);
        r[0] = 1.0;
        rows.push_back(std::move(r));
        rhs.push_back(1.0);
    }
    Vec cost(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        cost[static_cast<std::size_t>(i)] = -a[static_cast<std::size_t>(i)];

    double lower = 0.0, upper = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 400; ++it) {
        const LpResult lp = solve_lp(cost, rows, rhs, {}, {});
        if (lp.status != LpStatus::optimal)
            throw SolverFailure("dual_opt relaxation did not solve",
                                std::numeric_limits<double>::infinity());
        upper = -lp.objective;
        const double s = prefix_norm(lp.x);
        if (s > 0.0) {
            lower = std::max(lower, upper / s);
            if (upper - lower <= tol * std::max(lower, 1e-30))
                return {0.5 * (lower + upper), lower, upper,
                        KSupportMethod::dual_opt};
            Vec z = lp.x;
            for (double &zi : z)
                zi /= s;
            rows.push_back(prefix_cut(z));
            rhs.push_back(1.0);
        } else {
            // Iterate vanished: the LP value itself is exact (y = 0 handled
            // earlier, so this only happens if cuts already pin x = 0).
            lower = upper;
            return {upper, lower, upper, KSupportMethod::dual_opt};
        }
    }
    throw SolverFailure("dual_opt cutting plane stalled", upper - lower);
}

// General case (weighted or atomic): free variables, per-coordinate boxes from
// the single-coordinate restrictions, cuts from restricted dual pairs.
KSupportResult dual_opt_general(const NormSpec &sub, int k, const Vec &ys,
                                double tol) {
    const int d = static_cast<int>(ys.size());
    if (d > 16)
        throw std::invalid_argument("dual_opt subset family too large (dim > 16)");
    const std::vector<std::uint32_t> masks = masks_up_to_size(d, k);

    std::vector<Vec> rows;
    std::vector<double> rhs;
    for (int i = 0; i < d; ++i) {
        std::vector<int> mem{i};
        for (int j = 0; j < d && static_cast<int>(mem.size()) < k; ++j)
            if (j != i)
                mem.push_back(j);
        std::sort(mem.begin(), mem.end());
        const IndexSet Ki(d, mem);
        Vec ei(static_cast<std::size_t>(d), 0.0);
        ei[static_cast<std::size_t>(i)] = 1.0;
        const double ci = k_star_eval(sub, ei, Ki);
        Vec r(static_cast<std::size_t>(d), 0.0);
        r[static_cast<std::size_t>(i)] = 1.0;
        rows.push_back(r);
        rhs.push_back(ci);
        r[static_cast<std::size_t>(i)] = -1.0;
        rows.push_back(std::move(r));
        rhs.push_back(ci);
    }
    Vec cost(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        cost[static_cast<std::size_t>(i)] = -ys[static_cast<std::size_t>(i)];

    double lower = 0.0, upper = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 400; ++it) {
        const LpResult lp = solve_lp_free(cost, rows, rhs, {}, {});
        if (lp.status != LpStatus::optimal)
            throw SolverFailure("dual_opt relaxation did not solve",
                                std::numeric_limits<double>::infinity());
        upper = -lp.objective;

        // Most violated restriction and the candidate rescale.
        double s = 0.0;
        std::uint32_t worst = masks.front();
        for (std::uint32_t m : masks) {
            const double g = eval(sub, masked(lp.x, m));
            if (g > s) {
                s     = g;
                worst = m;
            }
        }
        if (s > 0.0)
            lower = std::max(lower, upper / s);
        if (upper - lower <= tol * std::max(lower, 1e-30))
            return {0.5 * (lower + upper), lower, upper, KSupportMethod::dual_opt};
        if (s <= 0.0)
            return {upper, upper, upper, KSupportMethod::dual_opt};

        Vec z = masked(lp.x, worst);
        for (double &zi : z)
            zi /= s;
        const DualPair dp = dual_pair_search(sub, z, 1e-6);
        Vec w             = masked(dp.v, worst);
        const double tight = dot(w, z);
        if (tight <= 0.0)
            throw SolverFailure("dual_opt produced a degenerate cut",
                                upper - lower);
        for (double &wi : w)
            wi /= tight;
        rows.push_back(std::move(w));
        rhs.push_back(1.0);
    }
    throw SolverFailure("dual_opt cutting plane stalled", upper - lower);
}

// ---------------------------------------------------------------------------
// gauge_decomp: minimize sum_K ||v_K||* over decompositions y = sum_K v_K with
// supp(v_K) <= K, |K| = k.
//
// For lp and weighted-lp sources: consensus ADMM. Each block K carries a copy
// v_K with proximal step via Moreau (dual-norm prox = identity minus ball
// projection); the coupling step projects onto the affine constraint, which is
// diagonal because every coordinate appears in the same number of blocks. Both
// an upper bound (the feasible z iterate) and a lower bound (rescaled running
// multiplier, feasible for the dual problem) are tracked, so the returned
// bracket is certified no matter where ADMM stops.

double dual_norm_of(const NormSpec &sub, const Vec &v) { return dual_eval(sub, v); }

KSupportResult gauge_admm(const NormSpec &sub, int k, const Vec &ys,
                          double tol) {
    const int d = static_cast<int>(ys.size());
    if (d > 16)
        throw std::invalid_argument("gauge_decomp block family too large (dim > 16)");
    const std::vector<std::uint32_t> masks = masks_of_size(d, k);
    const std::size_t nb                   = masks.size();

    // Per-block gathered coordinates.
    std::vector<std::vector<int>> coords(nb);
    for (std::size_t b = 0; b < nb; ++b)
        for (int i = 0; i < d; ++i)
            if (masks[b] >> i & 1u)
                coords[b].push_back(i);

    const Vec w = sub.kind() == NormKind::weighted_lp
                      ? sub.weights()
                      : Vec(static_cast<std::size_t>(d), 1.0);
    const PNorm p = sub.p();

    // Every coordinate lies in C(d-1, k-1) blocks.
    double mult = 1.0;
    for (int i = 1; i <= k - 1; ++i)
        mult = mult * static_cast<double>(d - 1 - (k - 1) + i) / i;

    const double yscale = eval(NormSpec::lp(PNorm::inf()), ys);
    std::vector<Vec> v(nb), z(nb), u(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t kb = coords[b].size();
        v[b].assign(kb, 0.0);
        z[b].assign(kb, 0.0);
        u[b].assign(kb, 0.0);
        for (std::size_t j = 0; j < kb; ++j)
            z[b][j] = ys[static_cast<std::size_t>(coords[b][j])] / mult;
        v[b] = z[b];
    }

    double rho = std::max(mult / std::max(yscale, 1e-12), 1e-3);
    Vec wb;  // scratch weights per block
    Vec xhat(static_cast<std::size_t>(d), 0.0);

    double lower = 0.0, upper = std::numeric_limits<double>::infinity();
    const int max_iter = 200000;
    for (int it = 1; it <= max_iter; ++it) {
        // v-step: prox of ||.||* / rho at z - u, via Moreau decomposition.
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t kb = coords[b].size();
            Vec arg(kb);
            for (std::size_t j = 0; j < kb; ++j)
                arg[j] = z[b][j] - u[b][j];
            wb.resize(kb);
            for (std::size_t j = 0; j < kb; ++j)
                wb[j] = w[static_cast<std::size_t>(coords[b][j])];
            const Vec proj = proj_weighted_lp_ball(arg, wb, p, 1.0 / rho);
            for (std::size_t j = 0; j < kb; ++j)
                v[b][j] = arg[j] - proj[j];
        }
        // z-step: project v + u onto { z : sum of scattered blocks = y }.
        Vec agg(static_cast<std::size_t>(d), 0.0);
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t j = 0; j < coords[b].size(); ++j)
                agg[static_cast<std::size_t>(coords[b][j])] += v[b][j] + u[b][j];
        Vec corr(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            corr[static_cast<std::size_t>(i)] =
                (ys[static_cast<std::size_t>(i)] - agg[static_cast<std::size_t>(i)]) /
                mult;
        double rnorm = 0.0, snorm = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            for (std::size_t j = 0; j < coords[b].size(); ++j) {
                const double znew =
                    v[b][j] + u[b][j] + corr[static_cast<std::size_t>(coords[b][j])];
                snorm += (znew - z[b][j]) * (znew - z[b][j]);
                z[b][j] = znew;
                u[b][j] += v[b][j] - z[b][j];
                rnorm += (v[b][j] - z[b][j]) * (v[b][j] - z[b][j]);
            }
        }
        rnorm = std::sqrt(rnorm);
        snorm = rho * std::sqrt(snorm);

        if (it % 10 == 0 || rnorm + snorm == 0.0) {
            // Upper bound: z is affine-feasible by construction.
            double ub = 0.0;
            for (std::size_t b = 0; b < nb; ++b) {
                Vec vb(static_cast<std::size_t>(d), 0.0);
                for (std::size_t j = 0; j < coords[b].size(); ++j)
                    vb[static_cast<std::size_t>(coords[b][j])] = z[b][j];
                ub += dual_norm_of(sub, vb);
            }
            upper = std::min(upper, ub);
            // Lower bound: average the block multipliers into one x, rescale
            // into the feasible set of the companion maximization, take <x, y>.
            // The multiplier of the coupling constraint is -rho*u.
            std::fill(xhat.begin(), xhat.end(), 0.0);
            for (std::size_t b = 0; b < nb; ++b)
                for (std::size_t j = 0; j < coords[b].size(); ++j)
                    xhat[static_cast<std::size_t>(coords[b][j])] -= rho * u[b][j];
            for (double &xi : xhat)
                xi /= mult;
            const double s = max_restricted(sub, k, xhat, masks);
            if (s > 0.0)
                lower = std::max(lower, dot(xhat, ys) / s);
            if (upper - lower <= tol * std::max(lower, 1e-30))
                return {0.5 * (lower + upper), lower, upper,
                        KSupportMethod::gauge_decomp};
        }
        if (it % 50 == 0) {
            if (rnorm > 10.0 * snorm && rho < 1e8) {
                rho *= 2.0;
                for (auto &ub_ : u)
                    for (double &x : ub_)
                        x *= 0.5;
            } else if (snorm > 10.0 * rnorm && rho > 1e-8) {
                rho *= 0.5;
                for (auto &ub_ : u)
                    for (double &x : ub_)
                        x *= 2.0;
            }
        }
    }
    throw SolverFailure("gauge_decomp ADMM did not certify the requested gap",
                        upper - lower);
}

// Atomic sources: the dual norm is polyhedral (max over atoms), so the whole
// decomposition problem is one exact LP over block variables and epigraph
// auxiliaries.
KSupportResult gauge_lp_atomic(const NormSpec &n, int k, const Vec &y,
                               double /*tol*/) {
    const int d = static_cast<int>(y.size());
    if (d > 10)
        throw std::invalid_argument("gauge_decomp LP too large (dim > 10)");
    const std::vector<std::uint32_t> masks = masks_of_size(d, k);
    const std::size_t nb                   = masks.size();
    const auto &atoms                      = n.atoms();

    // Columns: for each block, k free coords split into +/- pairs; then one
    // t_b >= 0 per block.
    std::vector<std::vector<int>> coords(nb);
    for (std::size_t b = 0; b < nb; ++b)
        for (int i = 0; i < d; ++i)
            if (masks[b] >> i & 1u)
                coords[b].push_back(i);
    std::vector<std::size_t> voff(nb);
    std::size_t ncols = 0;
    for (std::size_t b = 0; b < nb; ++b) {
        voff[b] = ncols;
        ncols += 2 * coords[b].size();
    }
    const std::size_t toff = ncols;
    ncols += nb;

    Vec cost(ncols, 0.0);
    for (std::size_t b = 0; b < nb; ++b)
        cost[toff + b] = 1.0;

    std::vector<Vec> A_ub;
    std::vector<double> b_ub;
    for (std::size_t b = 0; b < nb; ++b)
        for (const Vec &a : atoms) {
            Vec row(ncols, 0.0);
            for (std::size_t j = 0; j < coords[b].size(); ++j) {
                const double aj = a[static_cast<std::size_t>(coords[b][j])];
                row[voff[b] + 2 * j]     = aj;
                row[voff[b] + 2 * j + 1] = -aj;
            }
            row[toff + b] = -1.0;
            A_ub.push_back(std::move(row));
            b_ub.push_back(0.0);
        }

    std::vector<Vec> A_eq;
    std::vector<double> b_eq;
    for (int i = 0; i < d; ++i) {
        Vec row(ncols, 0.0);
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t j = 0; j < coords[b].size(); ++j)
                if (coords[b][j] == i) {
                    row[voff[b] + 2 * j]     = 1.0;
                    row[voff[b] + 2 * j + 1] = -1.0;
                }
        A_eq.push_back(std::move(row));
        b_eq.push_back(y[static_cast<std::size_t>(i)]);
    }

    const LpResult lp = solve_lp(cost, A_ub, b_ub, A_eq, b_eq);
    if (lp.status != LpStatus::optimal)
        throw SolverFailure("gauge_decomp LP did not solve",
                            std::numeric_limits<double>::infinity());
    return {lp.objective, lp.objective, lp.objective,
            KSupportMethod::gauge_decomp};
}

}  // namespace

KSupportResult ksupport_eval_detail(const NormSpec &n, int k, const Vec &y,
                                    KSupportMethod method, double tol) {
    check_finite(y);
    if (n.dim() && *n.dim() != static_cast<int>(y.size()))
        throw std::invalid_argument("dimension mismatch between source and y");
    require_k_range(k, static_cast<int>(y.size()));
    if (tol <= 0.0)
        throw std::invalid_argument("tol must be positive");

    const bool has_analytic =
        n.kind() == NormKind::lp && (n.p().is_inf() || n.p().value() == 1.0);
    KSupportMethod resolved = method;
    if (method == KSupportMethod::automatic)
        resolved = has_analytic ? KSupportMethod::analytic : KSupportMethod::dual_opt;
    if (resolved == KSupportMethod::analytic && !has_analytic)
        throw std::invalid_argument(
            "analytic k-support requires an lp(1) or lp(inf) source");

    const bool zero =
        std::all_of(y.begin(), y.end(), [](double t) { return t == 0.0; });
    if (zero)
        return {0.0, 0.0, 0.0, resolved};

    if (resolved == KSupportMethod::analytic) {
        const double v =
            n.p().is_inf()
                ? eval(NormSpec::lp(PNorm::finite(1.0)), y)
                : std::max(eval(NormSpec::lp(PNorm::finite(1.0)), y) / k,
                           eval(NormSpec::lp(PNorm::inf()), y));
        return {v, v, v, KSupportMethod::analytic};
    }

    const Reduced red = reduce_problem(n, k, y);
    if (red.shortcut && n.kind() != NormKind::atomic) {
        const double v = dual_eval(red.sub, red.y);
        return {v, v, v, resolved};
    }
    if (red.shortcut) {  // atomic with k = d: single full block is optimal
        const double v = dual_eval(n, y);
        return {v, v, v, resolved};
    }

    if (resolved == KSupportMethod::dual_opt) {
        if (red.sub.kind() == NormKind::lp)
            return dual_opt_sorted_cone(red.sub, red.k, red.y, tol);
        return dual_opt_general(red.sub, red.k, red.y, tol);
    }

    // gauge_decomp
    if (n.kind() == NormKind::atomic)
        return gauge_lp_atomic(n, red.k, red.y, tol);
    return gauge_admm(red.sub, red.k, red.y, tol);
}

double ksupport_eval(const NormSpec &n, int k, const Vec &y,
                     KSupportMethod method, double tol) {
    return ksupport_eval_detail(n, k, y, method, tol).value;
}

NormSequenceReport ksupport_sequence(const NormSpec &n, const Vec &y,
                                     KSupportMethod method, double tol) {
    check_finite(y);
    const int d = static_cast<int>(y.size());
    if (d == 0)
        throw std::invalid_argument("y must be nonempty");

    Vec values(static_cast<std::size_t>(d));
    bool analytic_only = true;
    for (int k = 1; k <= d; ++k) {
        const KSupportResult r = ksupport_eval_detail(n, k, y, method, tol);
        values[static_cast<std::size_t>(k - 1)] = r.value;
        if (r.method != KSupportMethod::analytic && r.upper != r.lower)
            analytic_only = false;
    }
    const double rtol = analytic_only ? analytic_rtol : solver_rtol(tol);
    return make_sequence_report(values, SeqDirection::nonincreasing,
                                StationarityTol{1e-10, rtol});
}

bool topk_ball_contains(const NormSpec &n, int k, const Vec &x, double tol) {
    return topk_eval(n, k, x) <= 1.0 + tol;
}

bool ksupport_ball_contains(const NormSpec &n, int k, const Vec &y, double tol) {
    return ksupport_eval(n, k, y, KSupportMethod::automatic, tol) <= 1.0 + tol;
}

std::function<double(const Vec &)> topk_norm_fn(const NormSpec &n, int k) {
    return [n, k](const Vec &x) { return topk_eval(n, k, x); };
}

}  // namespace graded
