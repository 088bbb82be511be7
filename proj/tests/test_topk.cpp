#include <doctest.h>

#include <graded/topk.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>

using namespace graded;

namespace {

const NormSpec lp1   = NormSpec::lp(PNorm::finite(1));
const NormSpec lp2   = NormSpec::lp(PNorm::finite(2));
const NormSpec lpinf = NormSpec::lp(PNorm::inf());

// Gauge of conv{+-(2,1), +-(1,2)}: max(|x1+x2|/3, |x1-x2|). Not monotonic:
// filling in a coordinate can shrink the value.
NormSpec skew_gauge() { return NormSpec::atomic({{2.0, 1.0}, {1.0, 2.0}}); }

double l1(const Vec &y) {
    double s = 0.0;
    for (double t : y)
        s += std::abs(t);
    return s;
}
double l2(const Vec &y) {
    double s = 0.0;
    for (double t : y)
        s += t * t;
    return std::sqrt(s);
}

// Split formula for the classic (l2-source) k-support norm: with moduli
// sorted descending, the unique r in {0..k-1} with
//   a[k-r-2] > (sum of the tail from k-r-1) / (r+1) >= a[k-r-1]
// (a[-1] = +inf) gives value sqrt(sum of leading squares + tail^2/(r+1)).
double ksupport_l2_oracle(const Vec &y, int k) {
    Vec a = sorted_abs_desc(y);
    const int d = static_cast<int>(a.size());
    for (int r = 0; r <= k - 1; ++r) {
        double tail = 0.0;
        for (int i = k - r - 1; i < d; ++i)
            tail += a[static_cast<std::size_t>(i)];
        const double avg   = tail / (r + 1);
        const double upper = (k - r - 2 >= 0)
                                 ? a[static_cast<std::size_t>(k - r - 2)]
                                 : std::numeric_limits<double>::infinity();
        const double low = a[static_cast<std::size_t>(k - r - 1)];
        if (upper > avg + 1e-15 && avg >= low - 1e-12) {
            double head = 0.0;
            for (int i = 0; i < k - r - 1; ++i)
                head += a[static_cast<std::size_t>(i)] *
                        a[static_cast<std::size_t>(i)];
            return std::sqrt(head + tail * tail / (r + 1));
        }
    }
    REQUIRE(false);
    return 0.0;
}

void check_bracket(const KSupportResult &r, double tol) {
    CHECK(r.lower <= r.value + 1e-15);
    CHECK(r.value <= r.upper + 1e-15);
    CHECK(r.upper - r.lower <= 1.01 * tol * std::max(r.lower, 1e-30));
}

}  // namespace

TEST_CASE("top-k values for the l1 source are sums of leading moduli") {
    const Vec x{3.0, -1.0, 2.0};
    CHECK(topk_eval(lp1, 1, x) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(topk_eval(lp1, 2, x) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(topk_eval(lp1, 3, x) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("top-k values for the sup source are constant in k") {
    const Vec x{3.0, -7.0, 2.0};
    for (int k = 1; k <= 3; ++k)
        CHECK(topk_eval(lpinf, k, x) == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("top-k interpolates for the l2 source") {
    const Vec x{3.0, 4.0};
    CHECK(topk_eval(lp2, 1, x) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(topk_eval(lp2, 2, x) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("equal-weight weighted sources take the sorted fast path") {
    const NormSpec w2 = NormSpec::weighted_lp(PNorm::finite(2), {2.0, 2.0, 2.0});
    const Vec x{3.0, -1.0, 2.0};
    CHECK(topk_eval(w2, 2, x) ==
          doctest::Approx(2.0 * std::sqrt(13.0)).epsilon(1e-12));
}

TEST_CASE("unequal weights force the subset sweep") {
    const NormSpec w1 = NormSpec::weighted_lp(PNorm::finite(1), {1.0, 2.0, 3.0});
    const Vec ones{1.0, 1.0, 1.0};
    CHECK(topk_eval(w1, 1, ones) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(topk_eval(w1, 2, ones) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(topk_eval(w1, 3, ones) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("atomic sweep agrees with the l1 fast path on the cross polytope") {
    const NormSpec cross =
        NormSpec::atomic({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
    std::mt19937 rng(11);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 10; ++rep) {
        Vec x(3);
        for (double &t : x)
            t = g(rng);
        for (int k = 1; k <= 3; ++k)
            CHECK(topk_eval(cross, k, x) ==
                  doctest::Approx(topk_eval(lp1, k, x)).epsilon(1e-8));
    }
}

TEST_CASE("a strict subset can dominate the sweep for non-monotonic sources") {
    const NormSpec skew = skew_gauge();
    const Vec x{1.0, 1.0};
    CHECK(eval(skew, x) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    // Restriction to either single coordinate evaluates to 1 > 2/3.
    CHECK(topk_eval(skew, 1, x) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(topk_eval(skew, 2, x) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sweep parallelism is deterministic") {
    Vec w(15), x(15);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::normal_distribution<double> g;
    for (double &t : w)
        t = u(rng);
    for (double &t : x)
        t = g(rng);
    const NormSpec n = NormSpec::weighted_lp(PNorm::finite(3), w);

    ::setenv("GRADED_NORMS_THREADS", "1", 1);
    const double serial = topk_eval(n, 4, x);
    ::setenv("GRADED_NORMS_THREADS", "4", 1);
    const double parallel = topk_eval(n, 4, x);
    ::unsetenv("GRADED_NORMS_THREADS");
    CHECK(serial == parallel);
}

TEST_CASE("top-k argument validation") {
    CHECK_THROWS_AS(topk_eval(lp1, 0, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(topk_eval(lp1, 2, {1.0}), std::invalid_argument);
    const NormSpec w = NormSpec::weighted_lp(PNorm::finite(2), {1.0, 2.0});
    CHECK_THROWS_AS(topk_eval(w, 1, {1.0, 2.0, 3.0}), std::invalid_argument);
    // No fast path and too many coordinates to sweep.
    Vec big(21, 1.0), wbig(21, 1.0);
    wbig[0] = 2.0;
    CHECK_THROWS_AS(
        topk_eval(NormSpec::weighted_lp(PNorm::finite(2), wbig), 2, big),
        std::invalid_argument);
}

TEST_CASE("top-k sequence report: l1 source") {
    const NormSequenceReport rep = topk_sequence(lp1, {3.0, -1.0, 2.0});
    REQUIRE(rep.values.size() == 3);
    CHECK(rep.values[0] == doctest::Approx(3.0));
    CHECK(rep.values[1] == doctest::Approx(5.0));
    CHECK(rep.values[2] == doctest::Approx(6.0));
    CHECK(rep.monotone_ok);
    CHECK(rep.stationary_from == 3);
}

TEST_CASE("top-k sequence report: sup source is stationary from the start") {
    const NormSequenceReport rep = topk_sequence(lpinf, {3.0, -7.0, 2.0});
    CHECK(rep.monotone_ok);
    CHECK(rep.stationary_from == 1);
}

TEST_CASE("sequence report mechanics") {
    NormSequenceReport rep = make_sequence_report(
        {1.0, 2.0, 2.0 + 1e-13}, SeqDirection::nondecreasing, {});
    CHECK(rep.monotone_ok);
    CHECK(rep.stationary_from == 2);

    rep = make_sequence_report({1.0, 0.5}, SeqDirection::nondecreasing, {});
    CHECK_FALSE(rep.monotone_ok);

    rep = make_sequence_report({1.0, 0.5}, SeqDirection::nonincreasing, {});
    CHECK(rep.monotone_ok);
    CHECK(rep.stationary_from == 2);
}

// ---------------------------------------------------------------------------
// k-support

TEST_CASE("k-support closed forms for the l1 source") {
    const Vec y{3.0, -1.0, 2.0};
    CHECK(ksupport_eval(lp1, 1, y) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(ksupport_eval(lp1, 2, y) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ksupport_eval(lp1, 3, y) == doctest::Approx(3.0).epsilon(1e-12));

    const NormSequenceReport rep = ksupport_sequence(lp1, y);
    CHECK(rep.monotone_ok);
    CHECK(rep.stationary_from == 2);
}

TEST_CASE("k-support closed forms for the sup source") {
    const Vec y{3.0, -1.0, 2.0};
    for (int k = 1; k <= 3; ++k)
        CHECK(ksupport_eval(lpinf, k, y) == doctest::Approx(6.0).epsilon(1e-12));
    const NormSequenceReport rep = ksupport_sequence(lpinf, y);
    CHECK(rep.monotone_ok);
    CHECK(rep.stationary_from == 1);
}

TEST_CASE("all three methods agree on the analytic sources") {
    const Vec y{1.5, -0.25, 0.75, 2.0};
    const double tol = 1e-8;
    for (const NormSpec *n : {&lp1, &lpinf}) {
        for (int k = 1; k <= 4; ++k) {
            const KSupportResult a =
                ksupport_eval_detail(*n, k, y, KSupportMethod::analytic, tol);
            const KSupportResult d =
                ksupport_eval_detail(*n, k, y, KSupportMethod::dual_opt, tol);
            const KSupportResult gd = ksupport_eval_detail(
                *n, k, y, KSupportMethod::gauge_decomp, tol);
            check_bracket(d, tol);
            check_bracket(gd, tol);
            CHECK(d.value ==
                  doctest::Approx(a.value).epsilon(10 * tol));
            CHECK(gd.value ==
                  doctest::Approx(a.value).epsilon(10 * tol));
        }
    }
}

TEST_CASE("both solvers match the split formula for the l2 source") {
    CHECK(ksupport_l2_oracle({1.0, 1.0, 0.0}, 2) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(ksupport_l2_oracle({3.0, 0.0, 0.0}, 2) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ksupport_l2_oracle({2.0, 1.0, 1.0}, 2) ==
          doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));

    std::mt19937 rng(42);
    std::normal_distribution<double> g;
    const double tol = 1e-8;
    for (int rep = 0; rep < 3; ++rep) {
        Vec y(5);
        for (double &t : y)
            t = g(rng);
        for (int k = 1; k <= 5; ++k) {
            const double want = ksupport_l2_oracle(y, k);
            const KSupportResult d =
                ksupport_eval_detail(lp2, k, y, KSupportMethod::dual_opt, tol);
            check_bracket(d, tol);
            CHECK(d.value == doctest::Approx(want).epsilon(10 * tol));
            const KSupportResult gd = ksupport_eval_detail(
                lp2, k, y, KSupportMethod::gauge_decomp, tol);
            check_bracket(gd, tol);
            CHECK(gd.value == doctest::Approx(want).epsilon(10 * tol));
        }
    }
}

TEST_CASE("k-support endpoints: k=1 gives the dual-scaled l1, k=d the dual norm") {
    const Vec y{1.0, -2.0, 0.5};
    // Top-1 of any lp source is the sup norm, so its dual is l1.
    CHECK(ksupport_eval(lp2, 1, y) == doctest::Approx(l1(y)).epsilon(1e-7));
    CHECK(ksupport_eval(lp2, 3, y) == doctest::Approx(l2(y)).epsilon(1e-7));

    const NormSpec w =
        NormSpec::weighted_lp(PNorm::finite(2), {1.0, 0.5, 2.0});
    // Top-1 is max_i w_i |x_i|; its dual is sum |y_i| / w_i.
    const double want1 = 1.0 / 1.0 + 2.0 / 0.5 + 0.5 / 2.0;
    CHECK(ksupport_eval(w, 1, y) == doctest::Approx(want1).epsilon(1e-7));
    // k = d is the plain dual norm ||y ./ w||_2.
    const double wantd = l2({1.0 / 1.0, -2.0 / 0.5, 0.5 / 2.0});
    CHECK(ksupport_eval(w, 3, y) == doctest::Approx(wantd).epsilon(1e-7));
}

TEST_CASE("weighted middle k: the two solvers certify the same value") {
    const NormSpec w =
        NormSpec::weighted_lp(PNorm::finite(2), {1.0, 0.5, 2.0, 1.5});
    const Vec y{1.0, -2.0, 0.5, 1.0};
    const double tol = 1e-7;
    for (int k = 2; k <= 3; ++k) {
        const KSupportResult d =
            ksupport_eval_detail(w, k, y, KSupportMethod::dual_opt, tol);
        const KSupportResult gd =
            ksupport_eval_detail(w, k, y, KSupportMethod::gauge_decomp, tol);
        check_bracket(d, tol);
        check_bracket(gd, tol);
        CHECK(d.value == doctest::Approx(gd.value).epsilon(10 * tol));
    }
}

TEST_CASE("planted sparsity: supports smaller than k reduce analytically") {
    Vec y(12, 0.0);
    y[2] = 1.5;
    y[7] = -2.0;
    y[9] = 0.5;
    const double full = std::sqrt(1.5 * 1.5 + 4.0 + 0.25);
    for (int k = 3; k <= 12; ++k) {
        const KSupportResult r = ksupport_eval_detail(
            lp2, k, y, KSupportMethod::dual_opt, 1e-8);
        CHECK(r.value == doctest::Approx(full).epsilon(1e-12));
        CHECK(r.upper == r.lower);  // analytic shortcut, no iteration
    }
    // Below the support size the solver runs on the compacted problem.
    const KSupportResult r2 =
        ksupport_eval_detail(lp2, 2, y, KSupportMethod::dual_opt, 1e-8);
    CHECK(r2.value ==
          doctest::Approx(ksupport_l2_oracle(y, 2)).epsilon(1e-7));
}

TEST_CASE("atomic cross polytope reproduces the l1-source table entries") {
    const NormSpec cross =
        NormSpec::atomic({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}});
    const Vec y{3.0, -1.0, 2.0};
    const double tol = 1e-8;
    const Vec want{6.0, 3.0, 3.0};
    for (int k = 1; k <= 3; ++k) {
        const KSupportResult d =
            ksupport_eval_detail(cross, k, y, KSupportMethod::dual_opt, tol);
        check_bracket(d, tol);
        CHECK(d.value ==
              doctest::Approx(want[static_cast<std::size_t>(k - 1)])
                  .epsilon(10 * tol));
        const KSupportResult gd = ksupport_eval_detail(
            cross, k, y, KSupportMethod::gauge_decomp, tol);
        CHECK(gd.value ==
              doctest::Approx(want[static_cast<std::size_t>(k - 1)])
                  .epsilon(10 * tol));
    }
}

TEST_CASE("non-monotonic source: decomposition gauge exceeds the true dual") {
    const NormSpec skew = skew_gauge();
    const Vec y{1.0, 0.0};
    // Top-1 is the sup norm (both basis directions have gauge 1), so the true
    // k=1 dual is l1.
    const KSupportResult d =
        ksupport_eval_detail(skew, 1, y, KSupportMethod::dual_opt, 1e-8);
    check_bracket(d, 1e-8);
    CHECK(d.value == doctest::Approx(1.0).epsilon(1e-7));
    // The singleton block must carry y itself, and ||(1,0)||_dual = 2.
    const KSupportResult gd =
        ksupport_eval_detail(skew, 1, y, KSupportMethod::gauge_decomp, 1e-8);
    CHECK(gd.value == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(gd.value > d.value + 0.5);
}

TEST_CASE("k-support argument and method validation") {
    CHECK_THROWS_AS(ksupport_eval(lp2, 1, {1.0}, KSupportMethod::analytic),
                    std::invalid_argument);
    CHECK_THROWS_AS(ksupport_eval(lp1, 0, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ksupport_eval(lp1, 2, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ksupport_eval(lp1, 1, {1.0}, KSupportMethod::automatic, 0.0),
                    std::invalid_argument);

    const KSupportResult zero = ksupport_eval_detail(lp2, 2, {0.0, 0.0, 0.0});
    CHECK(zero.value == 0.0);
    CHECK(zero.upper == 0.0);
}

TEST_CASE("unit ball membership respects duality") {
    const Vec y{0.5, -0.5, 0.5};
    CHECK(ksupport_ball_contains(lp1, 2, y));         // value 1/2... scaled
    CHECK(topk_ball_contains(lp1, 2, {0.4, 0.1, 0.4}));
    CHECK_FALSE(topk_ball_contains(lp1, 2, {0.8, 0.4, 0.0}));

    // Hoelder-style pairing: <x, y> <= topk(x) * ksupport(y).
    std::mt19937 rng(3);
    std::normal_distribution<double> g;
    for (int rep = 0; rep < 20; ++rep) {
        Vec x(4), y2(4);
        for (double &t : x)
            t = g(rng);
        for (double &t : y2)
            t = g(rng);
        const double lhs = std::abs(dot(x, y2));
        const double rhs =
            topk_eval(lp2, 2, x) * ksupport_eval(lp2, 2, y2,
                                                 KSupportMethod::dual_opt, 1e-8);
        CHECK(lhs <= rhs * (1.0 + 1e-6));
    }
}

TEST_CASE("norm-function wrapper matches direct evaluation") {
    const auto fn = topk_norm_fn(lp1, 2);
    CHECK(fn({3.0, -1.0, 2.0}) == doctest::Approx(5.0).epsilon(1e-12));
}
