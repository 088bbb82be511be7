#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace graded {

using Vec = std::vector<double>;

/// Numeric support threshold: |x_i| > tau counts as a nonzero.
inline constexpr double support_tau = 1e-9;

/// Immutable sorted set of 0-based coordinate indices in an ambient dimension.
class IndexSet {
  public:
    IndexSet() = default;
    /// Validates: dim >= 0, members unique and within [0, dim). Sorts.
    IndexSet(int dim, std::vector<int> members);

    static IndexSet empty(int dim) { return IndexSet(dim, {}); }
    static IndexSet full(int dim);
    static IndexSet from_mask(int dim, std::uint32_t mask);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(members_.size()); }
    bool is_empty() const { return members_.empty(); }
    bool is_full() const { return size() == dim_; }
    bool contains(int i) const;
    bool is_subset_of(const IndexSet &other) const;
    IndexSet complement() const;
    /// Bitmask form; requires dim <= 32.
    std::uint32_t mask() const;
    const std::vector<int> &members() const { return members_; }

    bool operator==(const IndexSet &) const = default;

  private:
    int dim_ = 0;
    std::vector<int> members_;
};

/// Throws std::invalid_argument if any component is NaN or infinite.
void check_finite(const Vec &x);

double dot(const Vec &x, const Vec &y);
Vec hadamard(const Vec &x, const Vec &y);
/// Componentwise sign with sign(0) = 0.
Vec sign_vec(const Vec &x);
Vec abs_vec(const Vec &x);

IndexSet support(const Vec &x, double tau = support_tau);
/// Number of components with |x_i| > tau.
int l0(const Vec &x, double tau = support_tau);
/// Copy of x with every coordinate outside K set to zero.
Vec project(const Vec &x, const IndexSet &K);
/// Moduli of x sorted in nonincreasing order (ties keep index order).
Vec sorted_abs_desc(const Vec &x);
/// Indices attaining max_i |x_i| (exact float comparison); empty for x = {}.
std::vector<int> argmax_abs(const Vec &x);

/// The k-element subvector (x_i)_{i in K}, in increasing index order.
Vec gather(const Vec &x, const IndexSet &K);
/// Inverse of gather: places sub onto K inside a zero vector of size K.dim().
Vec scatter(const Vec &sub, const IndexSet &K);

/// Streams every K subset of {0..d-1} with |K| <= k exactly once, in
/// lexicographic order of the member list (starts with the empty set).
/// Refuses d > 24 (combinatorial blowup) and k outside [0, d].
void subsets_of_size_at_most(int d, int k,
                             const std::function<void(const IndexSet &)> &fn);

/// Materialized convenience form of the stream above; same order.
std::vector<IndexSet> list_subsets_of_size_at_most(int d, int k);

/// sum_{j=0..k} C(d, j)
std::uint64_t count_subsets_of_size_at_most(int d, int k);

} // namespace graded
