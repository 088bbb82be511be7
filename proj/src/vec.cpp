#include <graded/vec.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace graded {

IndexSet::IndexSet(int dim, std::vector<int> members)
    : dim_(dim), members_(std::move(members)) {
    if (dim < 0)
        throw std::invalid_argument("IndexSet: negative ambient dimension");
    std::sort(members_.begin(), members_.end());
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i] < 0 || members_[i] >= dim_)
            throw std::invalid_argument("IndexSet: member " +
                                        std::to_string(members_[i]) +
                                        " outside [0, " +
                                        std::to_string(dim_) + ")");
        if (i > 0 && members_[i] == members_[i - 1])
            throw std::invalid_argument("IndexSet: duplicate member " +
                                        std::to_string(members_[i]));
    }
}

IndexSet IndexSet::full(int dim) {
    std::vector<int> m(static_cast<std::size_t>(std::max(dim, 0)));
    std::iota(m.begin(), m.end(), 0);
    return IndexSet(dim, std::move(m));
}

IndexSet IndexSet::from_mask(int dim, std::uint32_t mask) {
    std::vector<int> m;
    for (int i = 0; i < dim; ++i)
        if (mask & (std::uint32_t{1} << i))
            m.push_back(i);
    return IndexSet(dim, std::move(m));
}

bool IndexSet::contains(int i) const {
    return std::binary_search(members_.begin(), members_.end(), i);
}

bool IndexSet::is_subset_of(const IndexSet &other) const {
    if (dim_ != other.dim_)
        throw std::invalid_argument("IndexSet: ambient dimension mismatch");
    return std::includes(other.members_.begin(), other.members_.end(),
                         members_.begin(), members_.end());
}

IndexSet IndexSet::complement() const {
    std::vector<int> m;
    m.reserve(static_cast<std::size_t>(dim_ - size()));
    auto it = members_.begin();
    for (int i = 0; i < dim_; ++i) {
        if (it != members_.end() && *it == i)
            ++it;
        else
            m.push_back(i);
    }
    return IndexSet(dim_, std::move(m));
}

std::uint32_t IndexSet::mask() const {
    if (dim_ > 32)
        throw std::invalid_argument("IndexSet::mask: dim > 32");
    std::uint32_t m = 0;
    for (int i : members_)
        m |= std::uint32_t{1} << i;
    return m;
}

void check_finite(const Vec &x) {
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument("vector has a non-finite component");
}

double dot(const Vec &x, const Vec &y) {
    if (x.size() != y.size())
        throw std::invalid_argument("dot: dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += x[i] * y[i];
    return s;
}

Vec hadamard(const Vec &x, const Vec &y) {
    if (x.size() != y.size())
        throw std::invalid_argument("hadamard: dimension mismatch");
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        z[i] = x[i] * y[i];
    return z;
}

Vec sign_vec(const Vec &x) {
    Vec s(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        s[i] = x[i] > 0 ? 1.0 : (x[i] < 0 ? -1.0 : 0.0);
    return s;
}

Vec abs_vec(const Vec &x) {
    Vec a(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        a[i] = std::abs(x[i]);
    return a;
}

IndexSet support(const Vec &x, double tau) {
    std::vector<int> m;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > tau)
            m.push_back(static_cast<int>(i));
    return IndexSet(static_cast<int>(x.size()), std::move(m));
}

int l0(const Vec &x, double tau) {
    int n = 0;
    for (double v : x)
        if (std::abs(v) > tau)
            ++n;
    return n;
}

Vec project(const Vec &x, const IndexSet &K) {
    if (static_cast<int>(x.size()) != K.dim())
        throw std::invalid_argument("project: dimension mismatch");
    Vec z(x.size(), 0.0);
    for (int i : K.members())
        z[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
    return z;
}

Vec sorted_abs_desc(const Vec &x) {
    Vec a = abs_vec(x);
    std::stable_sort(a.begin(), a.end(), std::greater<double>());
    return a;
}

std::vector<int> argmax_abs(const Vec &x) {
    std::vector<int> idx;
    double best = -1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double v = std::abs(x[i]);
        if (v > best) {
            best = v;
            idx.clear();
        }
        if (v == best)
            idx.push_back(static_cast<int>(i));
    }
    return idx;
}

Vec gather(const Vec &x, const IndexSet &K) {
    if (static_cast<int>(x.size()) != K.dim())
        throw std::invalid_argument("gather: dimension mismatch");
    Vec sub;
    sub.reserve(static_cast<std::size_t>(K.size()));
    for (int i : K.members())
        sub.push_back(x[static_cast<std::size_t>(i)]);
    return sub;
}

Vec scatter(const Vec &sub, const IndexSet &K) {
    if (static_cast<int>(sub.size()) != K.size())
        throw std::invalid_argument("scatter: size mismatch");
    Vec z(static_cast<std::size_t>(K.dim()), 0.0);
    for (std::size_t j = 0; j < sub.size(); ++j)
        z[static_cast<std::size_t>(K.members()[j])] = sub[j];
    return z;
}

void subsets_of_size_at_most(int d, int k,
                             const std::function<void(const IndexSet &)> &fn) {
    if (d < 0 || d > 24)
        throw std::invalid_argument(
            "subsets_of_size_at_most: d must be in [0, 24]");
    if (k < 0 || k > d)
        throw std::invalid_argument(
            "subsets_of_size_at_most: k must be in [0, d]");
    std::vector<int> cur;
    fn(IndexSet(d, cur));
    // Lexicographic successor over member lists, capped at size k:
    // extend with the next element when allowed, otherwise backtrack and
    // bump the last element.
    while (true) {
        int next = cur.empty() ? 0 : cur.back() + 1;
        if (static_cast<int>(cur.size()) < k && next < d) {
            cur.push_back(next);
        } else {
            while (!cur.empty() && cur.back() == d - 1)
                cur.pop_back();
            if (cur.empty())
                return;
            ++cur.back();
        }
        fn(IndexSet(d, cur));
    }
}

std::vector<IndexSet> list_subsets_of_size_at_most(int d, int k) {
    std::vector<IndexSet> out;
    subsets_of_size_at_most(d, k,
                            [&](const IndexSet &K) { out.push_back(K); });
    return out;
}

std::uint64_t count_subsets_of_size_at_most(int d, int k) {
    if (d < 0 || k < 0 || k > d)
        throw std::invalid_argument("count_subsets_of_size_at_most: bad args");
    std::uint64_t total = 0, binom = 1;
    for (int j = 0; j <= k; ++j) {
        total += binom;
        binom = binom * static_cast<std::uint64_t>(d - j) /
                static_cast<std::uint64_t>(j + 1);
    }
    return total;
}

} // namespace graded
