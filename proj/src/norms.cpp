#include <graded/norms.hpp>
#include <graded/simplex.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graded {

PNorm PNorm::finite(double p) {
    if (!(p >= 1.0) || !std::isfinite(p))
        throw std::invalid_argument("PNorm: finite exponent must be >= 1");
    return PNorm(p, false);
}

double PNorm::value() const {
    if (inf_)
        throw std::logic_error("PNorm::value called on the infinite exponent");
    return p_;
}

PNorm PNorm::conjugate() const {
    if (inf_)
        return finite(1.0);
    if (p_ == 1.0)
        return inf();
    return finite(p_ / (p_ - 1.0));
}

namespace {

// Max-scaled lp sum, safe for large exponents.
double lp_eval(const PNorm &p, const Vec &x) {
    double m = 0;
    for (double v : x)
        m = std::max(m, std::abs(v));
    if (m == 0.0)
        return 0.0;
    if (p.is_inf())
        return m;
    double pp = p.value();
    if (pp == 1.0) {
        double s = 0;
        for (double v : x)
            s += std::abs(v);
        return s;
    }
    double s = 0;
    for (double v : x)
        s += std::pow(std::abs(v) / m, pp);
    return m * std::pow(s, 1.0 / pp);
}

Vec divide(const Vec &x, const Vec &w) {
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        z[i] = x[i] / w[i];
    return z;
}

// Rank of the atom matrix via Gaussian elimination (columns = atoms).
int rank_of(const std::vector<Vec> &atoms, int d) {
    std::vector<Vec> rows;
    for (const Vec &a : atoms)
        rows.push_back(a);
    int rank = 0;
    for (int col = 0; col < d && rank < static_cast<int>(rows.size());
         ++col) {
        int piv = -1;
        double best = 1e-12;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (std::abs(rows[static_cast<std::size_t>(r)]
                             [static_cast<std::size_t>(col)]) > best) {
                best = std::abs(rows[static_cast<std::size_t>(r)]
                                    [static_cast<std::size_t>(col)]);
                piv = r;
            }
        if (piv < 0)
            continue;
        std::swap(rows[static_cast<std::size_t>(piv)],
                  rows[static_cast<std::size_t>(rank)]);
        const Vec &pr = rows[static_cast<std::size_t>(rank)];
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank)
                continue;
            Vec &rr = rows[static_cast<std::size_t>(r)];
            double f = rr[static_cast<std::size_t>(col)] /
                       pr[static_cast<std::size_t>(col)];
            if (f == 0.0)
                continue;
            for (int c = 0; c < d; ++c)
                rr[static_cast<std::size_t>(c)] -=
                    f * pr[static_cast<std::size_t>(c)];
        }
        ++rank;
    }
    return rank;
}

void require_dim_match(const NormSpec &n, const Vec &x, const char *who) {
    if (x.empty())
        throw std::invalid_argument(std::string(who) + ": empty vector");
    check_finite(x);
    if (auto d = n.dim(); d && *d != static_cast<int>(x.size()))
        throw std::invalid_argument(std::string(who) +
                                    ": vector dimension does not match spec");
}

// Elementwise Hoelder-equality mate for a plain lp norm, any scaling.
Vec lp_dual_mate(const PNorm &p, const Vec &u) {
    if (p.is_inf()) {
        Vec v(u.size(), 0.0);
        for (int i : argmax_abs(u))
            v[static_cast<std::size_t>(i)] =
                u[static_cast<std::size_t>(i)] > 0 ? 1.0 : -1.0;
        return v;
    }
    double pp = p.value();
    if (pp == 1.0)
        return sign_vec(u);
    double m = 0;
    for (double v : u)
        m = std::max(m, std::abs(v));
    Vec v(u.size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0)
            continue;
        double t = std::pow(std::abs(u[i]) / m, pp - 1.0);
        v[i] = u[i] > 0 ? t : -t;
    }
    return v;
}

} // namespace

NormSpec NormSpec::lp(PNorm p) {
    NormSpec n;
    n.kind_ = NormKind::lp;
    n.p_ = p;
    return n;
}

NormSpec NormSpec::weighted_lp(PNorm p, Vec w) {
    if (w.empty())
        throw std::invalid_argument("weighted_lp: empty weight vector");
    check_finite(w);
    for (double v : w)
        if (!(v > 0))
            throw std::invalid_argument(
                "weighted_lp: weights must be strictly positive");
    NormSpec n;
    n.kind_ = NormKind::weighted_lp;
    n.p_ = p;
    n.w_ = std::move(w);
    return n;
}

NormSpec NormSpec::atomic(std::vector<Vec> atoms) {
    if (atoms.empty())
        throw std::invalid_argument("atomic: no atoms");
    const int d = static_cast<int>(atoms.front().size());
    if (d < 1 || d > 8)
        throw std::invalid_argument("atomic: dimension must be in [1, 8]");
    for (const Vec &a : atoms) {
        if (static_cast<int>(a.size()) != d)
            throw std::invalid_argument("atomic: ragged atom list");
        check_finite(a);
        if (l0(a, 0.0) == 0)
            throw std::invalid_argument("atomic: zero atom");
    }
    // Symmetric closure with exact-duplicate removal.
    std::vector<Vec> closed;
    auto push_unique = [&](const Vec &a) {
        for (const Vec &b : closed)
            if (b == a)
                return;
        closed.push_back(a);
    };
    for (const Vec &a : atoms) {
        push_unique(a);
        Vec neg(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            neg[i] = -a[i];
        push_unique(neg);
    }
    if (rank_of(closed, d) < d)
        throw std::invalid_argument(
            "atomic: atoms do not span R^d, gauge would not be a norm");
    NormSpec n;
    n.kind_ = NormKind::atomic;
    n.atoms_ = std::move(closed);
    return n;
}

const PNorm &NormSpec::p() const {
    if (kind_ == NormKind::atomic)
        throw std::logic_error("NormSpec::p on an atomic spec");
    return p_;
}

const Vec &NormSpec::weights() const {
    if (kind_ != NormKind::weighted_lp)
        throw std::logic_error("NormSpec::weights on a non-weighted spec");
    return w_;
}

const std::vector<Vec> &NormSpec::atoms() const {
    if (kind_ != NormKind::atomic)
        throw std::logic_error("NormSpec::atoms on a non-atomic spec");
    return atoms_;
}

std::optional<int> NormSpec::dim() const {
    switch (kind_) {
        case NormKind::lp: return std::nullopt;
        case NormKind::weighted_lp: return static_cast<int>(w_.size());
        case NormKind::atomic:
            return static_cast<int>(atoms_.front().size());
    }
    return std::nullopt;
}

NormFlags NormSpec::flags() const {
    if (kind_ == NormKind::atomic)
        return declared;
    NormFlags f;
    bool fin = !p_.is_inf();
    if (kind_ == NormKind::lp) {
        f.permutation_invariant = true;
    } else {
        bool equal = std::all_of(w_.begin(), w_.end(),
                                 [&](double v) { return v == w_.front(); });
        f.permutation_invariant = equal;
    }
    f.monotonic = true;
    f.orthant_monotonic = true;
    f.orthant_strictly_monotonic = fin;
    f.strictly_convex = fin && p_.value() > 1.0;
    return f;
}

double eval(const NormSpec &n, const Vec &x) {
    require_dim_match(n, x, "eval");
    switch (n.kind()) {
        case NormKind::lp: return lp_eval(n.p(), x);
        case NormKind::weighted_lp:
            return lp_eval(n.p(), hadamard(n.weights(), x));
        case NormKind::atomic: break;
    }
    // Gauge LP: min sum(lambda) s.t. sum lambda_i a_i = x, lambda >= 0.
    const auto &atoms = n.atoms();
    const int d = static_cast<int>(x.size());
    const int na = static_cast<int>(atoms.size());
    std::vector<Vec> A_eq(static_cast<std::size_t>(d),
                          Vec(static_cast<std::size_t>(na)));
    for (int r = 0; r < d; ++r)
        for (int j = 0; j < na; ++j)
            A_eq[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] =
                atoms[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
    LpResult res = solve_lp(Vec(static_cast<std::size_t>(na), 1.0), {}, {},
                            A_eq, x);
    if (res.status != LpStatus::optimal)
        throw std::runtime_error("eval: atomic gauge LP did not solve");
    return std::max(res.objective, 0.0);
}

double dual_eval(const NormSpec &n, const Vec &y) {
    require_dim_match(n, y, "dual_eval");
    switch (n.kind()) {
        case NormKind::lp: return lp_eval(n.p().conjugate(), y);
        case NormKind::weighted_lp:
            return lp_eval(n.p().conjugate(), divide(y, n.weights()));
        case NormKind::atomic: break;
    }
    double best = 0;
    for (const Vec &a : n.atoms())
        best = std::max(best, dot(a, y));
    return best;
}

double bidual_eval(const NormSpec &n, const Vec &x) {
    require_dim_match(n, x, "bidual_eval");
    if (l0(x, 0.0) == 0)
        return 0.0;
    DualPair dp = dual_pair_search(n, x);
    return dot(x, dp.v);
}

double restrict_eval(const NormSpec &n, const Vec &x, const IndexSet &K) {
    require_dim_match(n, x, "restrict_eval");
    if (static_cast<int>(x.size()) != K.dim())
        throw std::invalid_argument("restrict_eval: dimension mismatch");
    if (!support(x).is_subset_of(K))
        throw std::invalid_argument("restrict_eval: x not supported in K");
    return eval(n, x);
}

double star_k_eval(const NormSpec &n, const Vec &y, const IndexSet &K) {
    require_dim_match(n, y, "star_k_eval");
    if (static_cast<int>(y.size()) != K.dim())
        throw std::invalid_argument("star_k_eval: dimension mismatch");
    if (!support(y).is_subset_of(K))
        throw std::invalid_argument("star_k_eval: y not supported in K");
    return dual_eval(n, y);
}

double k_star_eval(const NormSpec &n, const Vec &y, const IndexSet &K) {
    require_dim_match(n, y, "k_star_eval");
    if (static_cast<int>(y.size()) != K.dim())
        throw std::invalid_argument("k_star_eval: dimension mismatch");
    if (!support(y).is_subset_of(K))
        throw std::invalid_argument("k_star_eval: y not supported in K");
    if (K.is_empty())
        return 0.0;
    switch (n.kind()) {
        case NormKind::lp:
            return lp_eval(n.p().conjugate(), gather(y, K));
        case NormKind::weighted_lp:
            return lp_eval(n.p().conjugate(),
                           gather(divide(y, n.weights()), K));
        case NormKind::atomic: break;
    }
    // max sum lambda_i <a_i, y>  s.t.  sum lambda <= 1, lambda >= 0,
    // and sum lambda_i a_i vanishes outside K.
    const auto &atoms = n.atoms();
    const int na = static_cast<int>(atoms.size());
    Vec c(static_cast<std::size_t>(na));
    for (int j = 0; j < na; ++j)
        c[static_cast<std::size_t>(j)] =
            -dot(atoms[static_cast<std::size_t>(j)], y);
    std::vector<Vec> A_eq;
    Vec b_eq;
    const IndexSet Kc = K.complement();
    for (int i : Kc.members()) {
        Vec row(static_cast<std::size_t>(na));
        for (int j = 0; j < na; ++j)
            row[static_cast<std::size_t>(j)] =
                atoms[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
        A_eq.push_back(std::move(row));
        b_eq.push_back(0.0);
    }
    LpResult res = solve_lp(c, {Vec(static_cast<std::size_t>(na), 1.0)},
                            {1.0}, A_eq, b_eq);
    if (res.status != LpStatus::optimal)
        throw std::runtime_error("k_star_eval: atomic LP did not solve");
    return std::max(-res.objective, 0.0);
}

DualPair dual_pair_construct(const NormSpec &n, const Vec &u) {
    require_dim_match(n, u, "dual_pair_construct");
    if (n.kind() == NormKind::atomic)
        throw std::invalid_argument(
            "dual_pair_construct: analytic recipe needs an lp family spec");
    if (l0(u, 0.0) == 0)
        throw std::invalid_argument("dual_pair_construct: u must be nonzero");
    Vec v;
    if (n.kind() == NormKind::lp) {
        v = lp_dual_mate(n.p(), u);
    } else {
        // <u, w.*m(w.*u)> = <w.*u, m(w.*u)> with dual norm ||v./w||_q.
        v = hadamard(n.weights(), lp_dual_mate(n.p(), hadamard(n.weights(), u)));
    }
    // Hoelder guarantees gap >= 0; clamp float noise.
    double gap =
        std::max(eval(n, u) * dual_eval(n, v) - dot(u, v), 0.0);
    return {u, std::move(v), gap};
}

DualPair dual_pair_search(const NormSpec &n, const Vec &u, double tol) {
    require_dim_match(n, u, "dual_pair_search");
    if (l0(u, 0.0) == 0)
        throw std::invalid_argument("dual_pair_search: u must be nonzero");
    Vec v;
    if (n.kind() == NormKind::atomic) {
        // Maximize <u, y> over the polar polytope {y : <a, y> <= 1 for all
        // atoms a}; the simplex optimum is a polar vertex.
        const auto &atoms = n.atoms();
        Vec c(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            c[i] = -u[i];
        LpResult res =
            solve_lp_free(c, atoms, Vec(atoms.size(), 1.0), {}, {});
        if (res.status != LpStatus::optimal)
            throw std::runtime_error(
                "dual_pair_search: polar polytope LP did not solve");
        v = std::move(res.x);
    } else {
        v = dual_pair_construct(n, u).v;
    }
    double nv = dual_eval(n, v);
    if (nv <= 0)
        throw std::runtime_error("dual_pair_search: degenerate mate");
    for (double &t : v)
        t /= nv;
    double scale = eval(n, u); // * dual norm 1
    double gap = std::max(scale - dot(u, v), 0.0);
    if (!(gap <= tol * std::max(scale, 1e-300)))
        throw SolverFailure("dual_pair_search: gap above tolerance", gap);
    return {u, std::move(v), gap};
}

} // namespace graded
