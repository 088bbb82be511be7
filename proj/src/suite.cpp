#include <graded/suite.hpp>

#include <graded/gradedness.hpp>
#include <graded/norms.hpp>
#include <graded/properties.hpp>
#include <graded/topk.hpp>
#include <graded/vec.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace graded {
namespace {

constexpr double tiny = 1e-300;

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), tiny});
}

template <class... Args>
std::string strf(const char *pattern, Args &&...args) {
    char buf[320];
    std::snprintf(buf, sizeof(buf), pattern, std::forward<Args>(args)...);
    return buf;
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double normal() {
        std::normal_distribution<double> n(0.0, 1.0);
        return n(gen);
    }
    double uniform(double lo, double hi) {
        std::uniform_real_distribution<double> u(lo, hi);
        return u(gen);
    }
    int uniform_int(int lo, int hi) {
        std::uniform_int_distribution<int> u(lo, hi);
        return u(gen);
    }
    Vec gaussian(int d) {
        Vec x(d);
        for (auto &t : x) t = normal();
        return x;
    }
    /// Exactly s nonzero entries, signed magnitudes in [0.1, 10]: far enough
    /// from both zero and each other that support is unambiguous at solver
    /// precision.
    Vec planted(int d, int s) {
        std::vector<int> idx(d);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), gen);
        Vec x(d, 0.0);
        for (int j = 0; j < s; ++j) {
            const double mag = uniform(0.1, 10.0);
            x[idx[j]] = uniform_int(0, 1) ? mag : -mag;
        }
        return x;
    }
};

NormSpec cross2() { return NormSpec::atomic({{1.0, 0.0}, {0.0, 1.0}}); }
NormSpec cube2() { return NormSpec::atomic({{1.0, 1.0}, {1.0, -1.0}}); }
NormSpec skew2() { return NormSpec::atomic({{2.0, 1.0}, {1.0, 2.0}}); }
NormSpec corner3() {
    return NormSpec::atomic(
        {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.8, 0.8, 0.8}});
}

struct Outcome {
    bool ok = true;
    std::string detail;
};

// 1. Sorted-moduli closed forms for the l1/l2/sup top-k norms against an
//    exhaustive restriction sweep and the library evaluator; the matching
//    k-support closed forms against the certified dual solver.
Outcome closed_form_table(const SuiteOptions &o) {
    const int vectors = o.quick ? 100 : 1000;
    const NormSpec sources[3] = {NormSpec::lp(PNorm::finite(1.0)),
                                 NormSpec::lp(PNorm::finite(2.0)),
                                 NormSpec::lp(PNorm::inf())};
    const char *plabel[3] = {"1", "2", "inf"};
    Rng rng(o.seed + 1);
    double worst_topk = 0.0, worst_brute = 0.0, worst_ks = 0.0;
    for (int d = 2; d <= 8; ++d) {
        for (int t = 0; t < vectors; ++t) {
            const Vec x = rng.gaussian(d);
            const Vec a = sorted_abs_desc(x);
            Vec sum1(d + 1, 0.0), sum2(d + 1, 0.0);
            for (int k = 1; k <= d; ++k) {
                sum1[k] = sum1[k - 1] + a[k - 1];
                sum2[k] = sum2[k - 1] + a[k - 1] * a[k - 1];
            }
            double best[3][9] = {};
            subsets_of_size_at_most(d, d, [&](const IndexSet &K) {
                if (K.is_empty()) return;
                const Vec xk = project(x, K);
                for (int si = 0; si < 3; ++si)
                    best[si][K.size()] =
                        std::max(best[si][K.size()], eval(sources[si], xk));
            });
            for (int si = 0; si < 3; ++si)
                for (int k = 2; k <= d; ++k)
                    best[si][k] = std::max(best[si][k], best[si][k - 1]);
            for (int k = 1; k <= d; ++k) {
                const double closed[3] = {sum1[k], std::sqrt(sum2[k]), a[0]};
                for (int si = 0; si < 3; ++si) {
                    const double lib = topk_eval(sources[si], k, x);
                    const double e_lib = rel_diff(lib, closed[si]);
                    const double e_brute = rel_diff(best[si][k], closed[si]);
                    worst_topk = std::max(worst_topk, e_lib);
                    worst_brute = std::max(worst_brute, e_brute);
                    if (e_lib > 1e-12 || e_brute > 1e-12)
                        return {false, strf("top-k mismatch p=%s d=%d k=%d: "
                                            "lib %.17g brute %.17g closed %.17g",
                                            plabel[si], d, k, lib, best[si][k],
                                            closed[si])};
                }
                const double ks1_closed = std::max(sum1[d] / k, a[0]);
                const double ks1 = ksupport_eval(sources[0], k, x,
                                                 KSupportMethod::dual_opt, o.tol);
                const double ksinf = ksupport_eval(sources[2], k, x,
                                                   KSupportMethod::dual_opt, o.tol);
                const double e1 = rel_diff(ks1, ks1_closed);
                const double einf = rel_diff(ksinf, sum1[d]);
                worst_ks = std::max({worst_ks, e1, einf});
                if (e1 > 1e-6 || einf > 1e-6)
                    return {false, strf("k-support mismatch d=%d k=%d: "
                                        "l1-source %.17g vs %.17g, "
                                        "sup-source %.17g vs %.17g",
                                        d, k, ks1, ks1_closed, ksinf, sum1[d])};
            }
        }
    }
    return {true, strf("%d vectors per dim 2..8; worst rel: evaluator %.1e, "
                       "sweep %.1e, k-support %.1e",
                       vectors, worst_topk, worst_brute, worst_ks)};
}

// 2. Top-k chains never decrease and k-support chains never increase, on
//    every vector tested. Holds for orthant-monotone sources (projection
//    onto a smaller support can inflate a non-monotone norm, so the skew
//    gauge is excluded by design).
Outcome chain_monotonicity(const SuiteOptions &o) {
    const int per = o.quick ? 40 : 150;
    struct Probe {
        NormSpec n;
        int d;
        std::string label;
    };
    std::vector<Probe> probes;
    for (double p : {1.0, 2.0, 3.0})
        for (int d : {2, 5, 8})
            probes.push_back(
                {NormSpec::lp(PNorm::finite(p)), d, strf("lp:%g d=%d", p, d)});
    probes.push_back({NormSpec::lp(PNorm::inf()), 6, "lp:inf d=6"});
    probes.push_back({NormSpec::weighted_lp(PNorm::finite(2.0), {1.0, 2.0, 0.5}),
                      3, "wlp:2 d=3"});
    probes.push_back({NormSpec::weighted_lp(PNorm::finite(1.0),
                                            {2.0, 1.0, 1.0, 0.5}),
                      4, "wlp:1 d=4"});
    probes.push_back({cross2(), 2, "cross2"});
    probes.push_back({cube2(), 2, "cube2"});
    Rng rng(o.seed + 2);
    long checked = 0;
    for (const auto &pr : probes) {
        for (int t = 0; t < per; ++t) {
            const Vec x = (t % 3 == 2)
                              ? rng.planted(pr.d, rng.uniform_int(0, pr.d))
                              : rng.gaussian(pr.d);
            const auto up = topk_sequence(pr.n, x);
            const auto down =
                ksupport_sequence(pr.n, x, KSupportMethod::automatic, o.tol);
            if (!up.monotone_ok)
                return {false,
                        strf("%s trial %d: top-k chain decreased",
                             pr.label.c_str(), t)};
            if (!down.monotone_ok)
                return {false,
                        strf("%s trial %d: k-support chain increased",
                             pr.label.c_str(), t)};
            ++checked;
        }
    }
    return {true, strf("%ld chains nondecreasing up / nonincreasing down",
                       checked)};
}

// 3. Planted support size is recovered exactly by the top-k stationarity
//    index across p in {1, 1.5, 2, 3}, every d <= 10 and every s <= d.
Outcome support_recovery_primal(const SuiteOptions &o) {
    const int per = o.quick ? 100 : 1000;
    Rng rng(o.seed + 3);
    long total = 0;
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        const NormSpec n = NormSpec::lp(PNorm::finite(p));
        for (int d = 1; d <= 10; ++d)
            for (int s = 0; s <= d; ++s)
                for (int t = 0; t < per; ++t) {
                    const Vec x = rng.planted(d, s);
                    const int rec = l0_from_topk(n, x, o.tol);
                    ++total;
                    if (rec != s)
                        return {false,
                                strf("p=%.1f d=%d s=%d trial %d: recovered %d",
                                     p, d, s, t, rec)};
                }
    }
    return {true,
            strf("%ld planted vectors, support recovered exactly", total)};
}

// 4. The sup norm defeats the primal route: (1,-7,2) gives a constant chain
//    with stationarity index 1, and the norm is orthant monotone but not
//    strictly so, falsified by the half-coordinate tie family (1, 1/2, 0, ...).
Outcome supnorm_necessity(const SuiteOptions &o) {
    const NormSpec linf = NormSpec::lp(PNorm::inf());
    const Vec x{1.0, -7.0, 2.0};
    const auto seq = topk_sequence(linf, x);
    if (seq.values != Vec{7.0, 7.0, 7.0})
        return {false, "top-k chain of (1,-7,2) under the sup norm is not "
                       "constant at 7"};
    const int rec = l0_from_topk(linf, x, o.tol);
    if (rec != 1)
        return {false, strf("stationarity index %d, expected 1 (true support "
                            "is 3)",
                            rec)};
    const int trials = o.quick ? 100 : 1000;
    const auto om = check_orthant_monotonic(linf, 4, trials, o.seed + 4);
    if (om.verdict != Verdict::passed)
        return {false, strf("orthant monotonicity: %s",
                            to_string(om.verdict).c_str())};
    const auto osm =
        check_orthant_strictly_monotonic(linf, 4, trials, o.seed + 4);
    if (osm.verdict != Verdict::falsified || !osm.witness)
        return {false, strf("strict variant was not falsified (%s)",
                            to_string(osm.verdict).c_str())};
    const auto &w = *osm.witness;
    if (w.vectors.size() != 2)
        return {false, "strictness witness is not a vector pair"};
    const Vec &shrunk = w.vectors[0].second;
    const Vec &orig = w.vectors[1].second;
    const bool family =
        shrunk.size() == 4 && orig.size() == 4 && shrunk[0] == orig[0] &&
        shrunk[1] == 0.5 * orig[1] && shrunk[2] == orig[2] &&
        shrunk[3] == orig[3] && orig[0] != 0.0 &&
        eval(linf, shrunk) == eval(linf, orig) && w.margin == 0.0;
    if (!family)
        return {false, "witness is not the halved-coordinate tie pair"};
    return {true, strf("constant chain, index 1 vs support 3; OM passed, "
                       "strict OM falsified by the tie pair after %d trials",
                       osm.trials)};
}

// 5. Planted support size is recovered through the dual chain: first k where
//    the k-support value meets the dual norm. Near-misses retry at 1e-10
//    before counting as failures.
Outcome support_recovery_dual(const SuiteOptions &o) {
    const int per = o.quick ? 50 : 200;
    Rng rng(o.seed + 5);
    long total = 0;
    int retried = 0;
    for (double p : {1.5, 2.0, 3.0}) {
        const NormSpec n = NormSpec::lp(PNorm::finite(p));
        for (int d : {2, 4, 6})
            for (int t = 0; t < per; ++t) {
                const int s = rng.uniform_int(0, d);
                const Vec y = rng.planted(d, s);
                int rec = l0_from_ksupport(n, y, o.tol);
                if (rec != s) {
                    ++retried;
                    rec = l0_from_ksupport(n, y, 1e-10);
                }
                ++total;
                if (rec != s)
                    return {false, strf("p=%.1f d=%d s=%d trial %d: recovered "
                                        "%d through the dual chain",
                                        p, d, s, t, rec)};
            }
    }
    return {true, strf("%ld planted vectors recovered through the dual chain "
                       "(%d retried at 1e-10)",
                       total, retried)};
}

// 6. The near-flat family (eps/(d-1), ..., eps/(d-1), 1) under the l1 source:
//    k-support chain max((eps+1)/k, 1) goes stationary at k = 2 while the
//    support is the full dimension — the dual route's blind spot.
Outcome near_flat_family(const SuiteOptions &o) {
    const NormSpec l1 = NormSpec::lp(PNorm::finite(1.0));
    int checked = 0;
    for (int d : {2, 3, 5})
        for (double eps : {0.1, 0.5, 0.9}) {
            Vec y(d, eps / (d - 1));
            y[d - 1] = 1.0;
            const auto seq =
                ksupport_sequence(l1, y, KSupportMethod::automatic, o.tol);
            for (int k = 1; k <= d; ++k) {
                const double want = std::max((eps + 1.0) / k, 1.0);
                if (rel_diff(seq.values[k - 1], want) > 1e-12)
                    return {false,
                            strf("d=%d eps=%.1f k=%d: value %.17g, closed "
                                 "form %.17g",
                                 d, eps, k, seq.values[k - 1], want)};
            }
            if (seq.stationary_from != 2)
                return {false, strf("d=%d eps=%.1f: chain stationary from %d, "
                                    "expected 2",
                                    d, eps, seq.stationary_from)};
            if (l0(y) != d)
                return {false, strf("d=%d eps=%.1f: family member lost full "
                                    "support",
                                    d, eps)};
            ++checked;
        }
    return {true, strf("%d family members flatten at 2 with full support d",
                       checked)};
}

// 7. Orthant monotonicity, restriction-duality commutation, and non-strict
//    Birkhoff orthogonality across complements deliver the same verdict on
//    every source; the skew gauge falsifies all three.
Outcome equivalence_web(const SuiteOptions &o) {
    const int trials = o.quick ? 100 : 1000;
    struct Entry {
        NormSpec n;
        int d;
        std::string label;
        bool om_expected;
    };
    std::vector<Entry> entries;
    for (double p : {1.0, 2.0})
        entries.push_back(
            {NormSpec::lp(PNorm::finite(p)), 4, strf("lp:%g", p), true});
    entries.push_back({NormSpec::lp(PNorm::inf()), 4, "lp:inf", true});
    entries.push_back({cross2(), 2, "cross2", true});
    entries.push_back({cube2(), 2, "cube2", true});
    entries.push_back({skew2(), 2, "skew2", false});
    bool saw_falsifier = false;
    for (const auto &e : entries) {
        const auto om = check_orthant_monotonic(e.n, e.d, trials, o.seed + 7);
        const auto rd = check_restriction_duality(e.n, e.d, trials, o.seed + 7);
        const auto bk =
            check_birkhoff_all(e.n, e.d, trials, o.seed + 7, false);
        if (om.verdict != rd.verdict || om.verdict != bk.verdict)
            return {false,
                    strf("%s: verdicts diverge (om=%s restriction=%s "
                         "birkhoff=%s)",
                         e.label.c_str(), to_string(om.verdict).c_str(),
                         to_string(rd.verdict).c_str(),
                         to_string(bk.verdict).c_str())};
        const Verdict want =
            e.om_expected ? Verdict::passed : Verdict::falsified;
        if (om.verdict != want)
            return {false, strf("%s: expected %s, got %s", e.label.c_str(),
                                to_string(want).c_str(),
                                to_string(om.verdict).c_str())};
        saw_falsifier = saw_falsifier || !e.om_expected;
    }
    if (!saw_falsifier)
        return {false, "no falsifying source exercised"};
    return {true, strf("%zu sources, three characterizations agree on each "
                       "(one falsifier)",
                       entries.size())};
}

// 8. On strictly convex lp spaces the orthant-monotone => strictly-monotone
//    promotion holds under randomized probing.
Outcome rotund_promotion(const SuiteOptions &o) {
    const int trials = o.quick ? 100 : 1000;
    for (double p : {1.2, 1.5, 2.0, 4.0}) {
        const auto rep = check_om_rotund_implies_osm(
            NormSpec::lp(PNorm::finite(p)), 4, trials, o.seed + 8);
        if (rep.verdict != Verdict::passed)
            return {false,
                    strf("p=%.1f: %s", p, to_string(rep.verdict).c_str())};
    }
    return {true, "promotion held for p in {1.2, 1.5, 2, 4} at dim 4"};
}

// 9. Dual-of-dual returns the original norm value: closed-form duals for lp
//    sources, certified LP round trips for atomic ones.
Outcome bidual_identity(const SuiteOptions &o) {
    const int per = o.quick ? 100 : 1000;
    Rng rng(o.seed + 9);
    double worst_lp = 0.0, worst_atomic = 0.0;
    const NormSpec lps[5] = {
        NormSpec::lp(PNorm::finite(1.0)), NormSpec::lp(PNorm::finite(1.5)),
        NormSpec::lp(PNorm::finite(2.0)), NormSpec::lp(PNorm::finite(3.0)),
        NormSpec::lp(PNorm::inf())};
    for (const auto &n : lps)
        for (int t = 0; t < per; ++t) {
            const int d = 2 + t % 5;
            const Vec x = rng.gaussian(d);
            const double e = rel_diff(eval(n, x), bidual_eval(n, x));
            worst_lp = std::max(worst_lp, e);
            if (e > 1e-9)
                return {false,
                        strf("lp source d=%d trial %d: bidual off by %.2e "
                             "relative",
                             d, t, e)};
        }
    const NormSpec atomics[4] = {cross2(), cube2(), skew2(), corner3()};
    const char *alabel[4] = {"cross2", "cube2", "skew2", "corner3"};
    for (int si = 0; si < 4; ++si) {
        const int d = *atomics[si].dim();
        for (int t = 0; t < per; ++t) {
            const Vec x = rng.gaussian(d);
            const double e =
                rel_diff(eval(atomics[si], x), bidual_eval(atomics[si], x));
            worst_atomic = std::max(worst_atomic, e);
            if (e > 1e-6)
                return {false, strf("%s trial %d: bidual off by %.2e relative",
                                    alabel[si], t, e)};
        }
    }
    return {true, strf("worst relative gap: lp %.1e, atomic %.1e", worst_lp,
                       worst_atomic)};
}

// 10. The dual-optimization and gauge-decomposition k-support routes agree
//     within 10x the requested tolerance.
Outcome solver_agreement(const SuiteOptions &o) {
    const int per = o.quick ? 50 : 200;
    Rng rng(o.seed + 10);
    const std::pair<NormSpec, const char *> sources[3] = {
        {NormSpec::lp(PNorm::finite(1.0)), "lp:1"},
        {NormSpec::lp(PNorm::finite(2.0)), "lp:2"},
        {NormSpec::lp(PNorm::inf()), "lp:inf"}};
    double worst = 0.0;
    long pairs = 0;
    for (const auto &[n, label] : sources) {
        for (int t = 0; t < per; ++t) {
            const int d = 2 + 2 * (t % 3);
            const Vec y = (t % 2 == 1) ? rng.planted(d, rng.uniform_int(1, d))
                                       : rng.gaussian(d);
            for (int k = 1; k <= d; ++k) {
                const double a =
                    ksupport_eval(n, k, y, KSupportMethod::dual_opt, o.tol);
                const double b = ksupport_eval(n, k, y,
                                               KSupportMethod::gauge_decomp,
                                               o.tol);
                const double gap =
                    std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
                worst = std::max(worst, gap);
                ++pairs;
                if (gap > 10.0 * o.tol)
                    return {false,
                            strf("%s d=%d k=%d: dual route %.12g vs gauge "
                                 "route %.12g",
                                 label, d, k, a, b)};
            }
        }
    }
    return {true, strf("%ld (source, y, k) triples agree; worst relative gap "
                       "%.1e",
                       pairs, worst)};
}

struct Criterion {
    int id;
    std::string name;
    std::vector<std::string> tags;
    double cap_seconds; ///< 0 = uncapped
    std::function<Outcome(const SuiteOptions &)> run;
};

std::vector<Criterion> criteria() {
    return {
        {1, "sorted-moduli closed forms", {"topk", "ksupport"}, 60.0,
         closed_form_table},
        {2, "chain monotonicity", {"topk", "ksupport"}, 0.0,
         chain_monotonicity},
        {3, "support recovery, primal chain", {"gradedness", "l0"}, 120.0,
         support_recovery_primal},
        {4, "sup-norm necessity witness", {"gradedness", "properties"}, 0.0,
         supnorm_necessity},
        {5, "support recovery, dual chain", {"gradedness", "l0"}, 0.0,
         support_recovery_dual},
        {6, "near-flat counterexample family", {"gradedness", "ksupport"}, 0.0,
         near_flat_family},
        {7, "orthant-monotonicity equivalence web", {"properties"}, 0.0,
         equivalence_web},
        {8, "rotund strictness promotion", {"properties"}, 0.0,
         rotund_promotion},
        {9, "bidual identity", {"norms"}, 0.0, bidual_identity},
        {10, "k-support solver cross-agreement", {"topk", "solver"}, 0.0,
         solver_agreement},
    };
}

std::string lower(std::string s) {
    for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

std::vector<CriterionResult> run_acceptance_suite(const SuiteOptions &opts) {
    if (!(opts.tol > 0.0))
        throw std::invalid_argument("run_acceptance_suite: tol must be positive");
    const std::string needle = lower(opts.filter);
    std::vector<CriterionResult> out;
    for (const auto &c : criteria()) {
        if (!needle.empty()) {
            bool hit = lower(c.name).find(needle) != std::string::npos;
            for (const auto &tag : c.tags)
                hit = hit || lower(tag).find(needle) != std::string::npos;
            if (!hit) continue;
        }
        CriterionResult r;
        r.id = c.id;
        r.name = c.name;
        const auto start = std::chrono::steady_clock::now();
        Outcome oc;
        try {
            oc = c.run(opts);
        } catch (const SolverFailure &e) {
            oc = {false, strf("solver failure: %s", e.what())};
        } catch (const std::exception &e) {
            oc = {false, strf("exception: %s", e.what())};
        }
        r.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
        r.passed = oc.ok;
        r.detail = oc.detail;
        if (r.passed && c.cap_seconds > 0.0 && r.seconds > c.cap_seconds) {
            r.passed = false;
            r.detail = strf("runtime %.1fs exceeded the %.0fs budget; ",
                            r.seconds, c.cap_seconds) +
                       r.detail;
        }
        out.push_back(std::move(r));
    }
    return out;
}

bool suite_all_passed(const std::vector<CriterionResult> &results) {
    return std::all_of(results.begin(), results.end(),
                       [](const CriterionResult &r) { return r.passed; });
}

Json suite_report_json(const std::vector<CriterionResult> &results,
                       const SuiteOptions &opts) {
    Json arr = Json::array();
    for (const auto &r : results)
        arr.push_back(Json{{"id", r.id},
                           {"name", r.name},
                           {"passed", r.passed},
                           {"seconds", r.seconds},
                           {"detail", r.detail}});
    return Json{{"criteria", arr},
                {"all_passed", suite_all_passed(results)},
                {"quick", opts.quick},
                {"filter", opts.filter}};
}

} // namespace graded
