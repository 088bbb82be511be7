#include <graded/simplex.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace graded {
namespace {

constexpr double kCostEps = 1e-9;   // reduced cost considered negative
constexpr double kPivotEps = 1e-11; // smallest acceptable pivot magnitude

// Dense tableau: rows 0..m-1 are constraints, row m is the objective,
// column ncols is the rhs. basis[i] is the column basic in row i.
struct Tableau {
    int m, ncols;
    std::vector<double> t; // (m+1) x (ncols+1)
    std::vector<int> basis;

    double &at(int r, int c) { return t[static_cast<std::size_t>(r) *
                                         (ncols + 1) + c]; }
    double at(int r, int c) const {
        return t[static_cast<std::size_t>(r) * (ncols + 1) + c];
    }

    void pivot(int pr, int pc) {
        double p = at(pr, pc);
        for (int c = 0; c <= ncols; ++c)
            at(pr, c) /= p;
        for (int r = 0; r <= m; ++r) {
            if (r == pr)
                continue;
            double f = at(r, pc);
            if (f == 0.0)
                continue;
            for (int c = 0; c <= ncols; ++c)
                at(r, c) -= f * at(pr, c);
            at(r, pc) = 0.0;
        }
        basis[static_cast<std::size_t>(pr)] = pc;
    }

    // Runs the simplex loop on the current objective row. `allowed(c)`
    // filters candidate entering columns. Returns false on unboundedness.
    bool iterate(const std::vector<char> &allowed) {
        long iters = 0;
        const long bland_after = 50L * (m + ncols) + 2000;
        const long max_iters = 2000000;
        while (true) {
            int pc = -1;
            if (iters < bland_after) { // Dantzig: most negative reduced cost
                double best = -kCostEps;
                for (int c = 0; c < ncols; ++c)
                    if (allowed[static_cast<std::size_t>(c)] &&
                        at(m, c) < best) {
                        best = at(m, c);
                        pc = c;
                    }
            } else { // Bland: first negative
                for (int c = 0; c < ncols; ++c)
                    if (allowed[static_cast<std::size_t>(c)] &&
                        at(m, c) < -kCostEps) {
                        pc = c;
                        break;
                    }
            }
            if (pc < 0)
                return true; // optimal
            int pr = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int r = 0; r < m; ++r) {
                double a = at(r, pc);
                if (a > kPivotEps) {
                    double ratio = at(r, ncols) / a;
                    if (ratio < best_ratio - 1e-12 ||
                        (ratio < best_ratio + 1e-12 &&
                         (pr < 0 || basis[static_cast<std::size_t>(r)] <
                                        basis[static_cast<std::size_t>(pr)]))) {
                        best_ratio = ratio;
                        pr = r;
                    }
                }
            }
            if (pr < 0)
                return false; // unbounded
            pivot(pr, pc);
            if (++iters > max_iters)
                throw std::runtime_error("simplex: iteration limit hit");
        }
    }
};

} // namespace

LpResult solve_lp(const Vec &c, const std::vector<Vec> &A_ub, const Vec &b_ub,
                  const std::vector<Vec> &A_eq, const Vec &b_eq) {
    const int n = static_cast<int>(c.size());
    const int m_ub = static_cast<int>(A_ub.size());
    const int m_eq = static_cast<int>(A_eq.size());
    if (static_cast<int>(b_ub.size()) != m_ub ||
        static_cast<int>(b_eq.size()) != m_eq)
        throw std::invalid_argument("solve_lp: rhs size mismatch");
    const int m = m_ub + m_eq;

    // Columns: n structural, m_ub slacks, then one artificial per row that
    // needs one. Rows are sign-normalized so every rhs is nonnegative.
    int nslack = m_ub;
    std::vector<double> rows(static_cast<std::size_t>(m) * (n + 1));
    std::vector<int> sgn(static_cast<std::size_t>(m), 1);
    for (int r = 0; r < m; ++r) {
        const Vec &a = r < m_ub ? A_ub[static_cast<std::size_t>(r)]
                                : A_eq[static_cast<std::size_t>(r - m_ub)];
        double b = r < m_ub ? b_ub[static_cast<std::size_t>(r)]
                            : b_eq[static_cast<std::size_t>(r - m_ub)];
        if (static_cast<int>(a.size()) != n)
            throw std::invalid_argument("solve_lp: row size mismatch");
        int s = b < 0 ? -1 : 1;
        sgn[static_cast<std::size_t>(r)] = s;
        for (int j = 0; j < n; ++j)
            rows[static_cast<std::size_t>(r) * (n + 1) + j] =
                s * a[static_cast<std::size_t>(j)];
        rows[static_cast<std::size_t>(r) * (n + 1) + n] = s * b;
    }

    // A slack column is a usable initial basis only when its sign is +1.
    std::vector<char> needs_art(static_cast<std::size_t>(m), 1);
    for (int r = 0; r < m_ub; ++r)
        if (sgn[static_cast<std::size_t>(r)] > 0)
            needs_art[static_cast<std::size_t>(r)] = 0;
    int nart = 0;
    for (int r = 0; r < m; ++r)
        nart += needs_art[static_cast<std::size_t>(r)];

    Tableau tb;
    tb.m = m;
    tb.ncols = n + nslack + nart;
    tb.t.assign(static_cast<std::size_t>(m + 1) * (tb.ncols + 1), 0.0);
    tb.basis.assign(static_cast<std::size_t>(m), -1);

    int art_col = n + nslack;
    for (int r = 0; r < m; ++r) {
        for (int j = 0; j <= n; ++j) {
            double v = rows[static_cast<std::size_t>(r) * (n + 1) + j];
            tb.at(r, j == n ? tb.ncols : j) = v;
        }
        if (r < m_ub)
            tb.at(r, n + r) = sgn[static_cast<std::size_t>(r)];
        if (needs_art[static_cast<std::size_t>(r)]) {
            tb.at(r, art_col) = 1.0;
            tb.basis[static_cast<std::size_t>(r)] = art_col;
            ++art_col;
        } else {
            tb.basis[static_cast<std::size_t>(r)] = n + r;
        }
    }

    std::vector<char> allowed(static_cast<std::size_t>(tb.ncols), 1);

    if (nart > 0) {
        // Phase 1: minimize the sum of artificials.
        for (int c2 = n + nslack; c2 < tb.ncols; ++c2)
            tb.at(m, c2) = 1.0;
        for (int r = 0; r < m; ++r)
            if (tb.basis[static_cast<std::size_t>(r)] >= n + nslack)
                for (int c2 = 0; c2 <= tb.ncols; ++c2)
                    tb.at(m, c2) -= tb.at(r, c2);
        if (!tb.iterate(allowed))
            throw std::runtime_error("simplex: phase 1 unbounded");
        if (tb.at(m, tb.ncols) < -1e-7)
            return {LpStatus::infeasible, Vec(), 0.0};
        // Drive any artificial still basic out of the basis.
        for (int r = 0; r < m; ++r) {
            if (tb.basis[static_cast<std::size_t>(r)] < n + nslack)
                continue;
            int pc = -1;
            for (int c2 = 0; c2 < n + nslack; ++c2)
                if (std::abs(tb.at(r, c2)) > kPivotEps) {
                    pc = c2;
                    break;
                }
            if (pc >= 0)
                tb.pivot(r, pc);
            // else: redundant row, harmless with the artificial pinned at 0.
        }
        for (int c2 = n + nslack; c2 < tb.ncols; ++c2)
            allowed[static_cast<std::size_t>(c2)] = 0;
    }

    // Phase 2: original objective, canonicalized against the basis.
    for (int c2 = 0; c2 <= tb.ncols; ++c2)
        tb.at(m, c2) = 0.0;
    for (int j = 0; j < n; ++j)
        tb.at(m, j) = c[static_cast<std::size_t>(j)];
    for (int r = 0; r < m; ++r) {
        int b = tb.basis[static_cast<std::size_t>(r)];
        double f = tb.at(m, b);
        if (f != 0.0)
            for (int c2 = 0; c2 <= tb.ncols; ++c2)
                tb.at(m, c2) -= f * tb.at(r, c2);
    }
    if (!tb.iterate(allowed))
        return {LpStatus::unbounded, Vec(), 0.0};

    Vec x(static_cast<std::size_t>(n), 0.0);
    for (int r = 0; r < m; ++r) {
        int b = tb.basis[static_cast<std::size_t>(r)];
        if (b < n)
            x[static_cast<std::size_t>(b)] = tb.at(r, tb.ncols);
    }
    double obj = 0;
    for (int j = 0; j < n; ++j)
        obj += c[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    return {LpStatus::optimal, std::move(x), obj};
}

LpResult solve_lp_free(const Vec &c, const std::vector<Vec> &A_ub,
                       const Vec &b_ub, const std::vector<Vec> &A_eq,
                       const Vec &b_eq) {
    const int n = static_cast<int>(c.size());
    auto split = [n](const Vec &row) {
        Vec r(static_cast<std::size_t>(2 * n));
        for (int j = 0; j < n; ++j) {
            r[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j)];
            r[static_cast<std::size_t>(n + j)] =
                -row[static_cast<std::size_t>(j)];
        }
        return r;
    };
    Vec c2 = split(c);
    std::vector<Vec> ub2, eq2;
    ub2.reserve(A_ub.size());
    eq2.reserve(A_eq.size());
    for (const Vec &r : A_ub)
        ub2.push_back(split(r));
    for (const Vec &r : A_eq)
        eq2.push_back(split(r));
    LpResult res = solve_lp(c2, ub2, b_ub, eq2, b_eq);
    if (res.status == LpStatus::optimal) {
        Vec x(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            x[static_cast<std::size_t>(j)] =
                res.x[static_cast<std::size_t>(j)] -
                res.x[static_cast<std::size_t>(n + j)];
        res.x = std::move(x);
    }
    return res;
}

} // namespace graded
