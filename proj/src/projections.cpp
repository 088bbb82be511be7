#include <graded/projections.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace graded {
namespace {

// Root of h(x) = x + c x^(p-1) - a on (0, a], h strictly increasing.
double coordinate_root(double a, double c, double p) {
    if (a <= 0)
        return 0.0;
    double lo = 0.0, hi = a;
    double x = a / (1.0 + c * std::pow(a, p - 2.0)); // linearized guess
    if (!(x > 0) || x >= a)
        x = 0.5 * a;
    for (int it = 0; it < 60; ++it) {
        double xp2 = std::pow(x, p - 2.0);
        double h = x + c * xp2 * x - a;
        if (h > 0)
            hi = x;
        else
            lo = x;
        double dh = 1.0 + c * (p - 1.0) * xp2;
        double step = h / dh;
        double nx = x - step;
        if (!(nx > lo && nx < hi))
            nx = 0.5 * (lo + hi);
        if (std::abs(h) <= 1e-15 * a || hi - lo <= 1e-16 * a)
            return x;
        x = nx;
    }
    return x;
}

Vec proj_finite_p(const Vec &u, const Vec &w, double p, double t) {
    const std::size_t d = u.size();
    // KKT: x_i + mu p w_i^p x_i^(p-1) = |u_i|; pick mu so the constraint
    // holds with equality. phi(mu) decreases from ||w.*u||_p^p - t^p > 0.
    Vec a(d), cw(d);
    for (std::size_t i = 0; i < d; ++i) {
        a[i] = std::abs(u[i]);
        cw[i] = p * std::pow(w[i], p);
    }
    auto phi = [&](double mu, Vec &x) {
        double s = 0;
        for (std::size_t i = 0; i < d; ++i) {
            x[i] = coordinate_root(a[i], mu * cw[i], p);
            s += std::pow(w[i] * x[i], p);
        }
        return s - std::pow(t, p);
    };
    Vec x(d, 0.0);
    double lo = 0.0, hi = 1.0;
    while (phi(hi, x) > 0) {
        lo = hi;
        hi *= 4.0;
        if (hi > 1e100)
            throw std::runtime_error("proj_lp_ball: multiplier diverged");
    }
    double mu = 0.5 * (lo + hi);
    const double target = std::pow(t, p);
    for (int it = 0; it < 200; ++it) {
        double f = phi(mu, x);
        if (f > 0)
            lo = mu;
        else
            hi = mu;
        if (std::abs(f) <= 1e-14 * target || hi - lo <= 1e-16 * (1.0 + hi))
            break;
        // Newton step on mu, safeguarded by the bracket.
        double df = 0;
        for (std::size_t i = 0; i < d; ++i) {
            if (x[i] <= 0)
                continue;
            double xp2 = std::pow(x[i], p - 2.0);
            double dxdmu = -cw[i] * xp2 * x[i] /
                           (1.0 + mu * cw[i] * (p - 1.0) * xp2);
            df += p * std::pow(w[i] * x[i], p - 1.0) * w[i] * dxdmu;
        }
        double nmu = df < 0 ? mu - f / df : -1.0;
        mu = (nmu > lo && nmu < hi) ? nmu : 0.5 * (lo + hi);
    }
    Vec z(d);
    for (std::size_t i = 0; i < d; ++i)
        z[i] = u[i] >= 0 ? x[i] : -x[i];
    return z;
}

Vec proj_weighted_l1(const Vec &u, const Vec &w, double t) {
    const std::size_t d = u.size();
    // z_i = sign(u_i) max(|u_i| - lam w_i, 0) with
    // sum w_i max(|u_i| - lam w_i, 0) = t; breakpoints at |u_i| / w_i.
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return std::abs(u[i]) / w[i] < std::abs(u[j]) / w[j];
    });
    // suffix sums over indices still active above the current breakpoint
    double s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < d; ++i) {
        s1 += w[i] * std::abs(u[i]);
        s2 += w[i] * w[i];
    }
    double lam = 0, prev = 0;
    for (std::size_t j = 0; j <= d; ++j) {
        double next = j < d ? std::abs(u[order[j]]) / w[order[j]]
                            : std::numeric_limits<double>::infinity();
        double cand = (s1 - t) / s2;
        if (cand >= prev - 1e-18 && cand <= next) {
            lam = std::max(cand, 0.0);
            break;
        }
        if (j < d) {
            s1 -= w[order[j]] * std::abs(u[order[j]]);
            s2 -= w[order[j]] * w[order[j]];
            prev = next;
        }
    }
    Vec z(d);
    for (std::size_t i = 0; i < d; ++i) {
        double m = std::max(std::abs(u[i]) - lam * w[i], 0.0);
        z[i] = u[i] >= 0 ? m : -m;
    }
    return z;
}

} // namespace

Vec proj_weighted_lp_ball(const Vec &u, const Vec &w, const PNorm &p,
                          double t) {
    if (u.size() != w.size())
        throw std::invalid_argument("proj_weighted_lp_ball: size mismatch");
    if (!(t > 0) || !std::isfinite(t))
        throw std::invalid_argument("proj_weighted_lp_ball: need t > 0");
    // already inside?
    double norm;
    Vec wu = hadamard(w, u);
    if (p.is_inf()) {
        norm = 0;
        for (double v : wu)
            norm = std::max(norm, std::abs(v));
    } else {
        norm = 0;
        double pp = p.value();
        if (pp == 1.0)
            for (double v : wu)
                norm += std::abs(v);
        else {
            double m = 0;
            for (double v : wu)
                m = std::max(m, std::abs(v));
            if (m > 0) {
                double s = 0;
                for (double v : wu)
                    s += std::pow(std::abs(v) / m, pp);
                norm = m * std::pow(s, 1.0 / pp);
            }
        }
    }
    if (norm <= t)
        return u;

    if (p.is_inf()) {
        Vec z(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            z[i] = std::clamp(u[i], -t / w[i], t / w[i]);
        return z;
    }
    if (p.value() == 1.0)
        return proj_weighted_l1(u, w, t);
    return proj_finite_p(u, w, p.value(), t);
}

Vec proj_lp_ball(const Vec &u, const PNorm &p, double t) {
    if (!p.is_inf() && p.value() == 2.0) { // exact radial scaling
        double n2 = 0;
        for (double v : u)
            n2 += v * v;
        n2 = std::sqrt(n2);
        if (n2 <= t)
            return u;
        Vec z(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            z[i] = u[i] * (t / n2);
        return z;
    }
    return proj_weighted_lp_ball(u, Vec(u.size(), 1.0), p, t);
}

} // namespace graded
