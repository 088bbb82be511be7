#include <doctest.h>

#include <graded/vec.hpp>

#include <random>
#include <stdexcept>

using namespace graded;

TEST_CASE("support and l0 honor the numeric threshold") {
    Vec x{0.0, 3.0, 0.0, -1.0};
    CHECK(support(x) == IndexSet(4, {1, 3}));
    CHECK(l0(x) == 2);
    // values at the threshold do not count, values just above do
    Vec y{1e-9, 2e-9, -1e-10};
    CHECK(l0(y) == 1);
    CHECK(support(y) == IndexSet(3, {1}));
    CHECK(l0(Vec{0, 0, 0}) == 0);
}

TEST_CASE("l0 equals support cardinality on random data") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::bernoulli_distribution zero(0.5);
    for (int t = 0; t < 200; ++t) {
        Vec x(8);
        for (double &v : x)
            v = zero(rng) ? 0.0 : g(rng);
        CHECK(l0(x) == support(x).size());
    }
}

TEST_CASE("project masks outside K and is idempotent") {
    Vec x{1, -2, 3, -4};
    IndexSet K(4, {0, 2});
    Vec pk = project(x, K);
    CHECK(pk == Vec{1, 0, 3, 0});
    CHECK(project(pk, K) == pk);
    // complement split reassembles x
    Vec pc = project(x, K.complement());
    for (int i = 0; i < 4; ++i)
        CHECK(pk[i] + pc[i] == x[i]);
    CHECK_THROWS_AS(project(Vec{1, 2}, K), std::invalid_argument);
}

TEST_CASE("sorted_abs_desc sorts moduli") {
    CHECK(sorted_abs_desc(Vec{3, -1, 2}) == Vec{3, 2, 1});
    CHECK(sorted_abs_desc(Vec{-5, 5, 0}) == Vec{5, 5, 0});
    CHECK(sorted_abs_desc(Vec{}) == Vec{});
}

TEST_CASE("sign and hadamard") {
    CHECK(sign_vec(Vec{3, -1, 0}) == Vec{1, -1, 0});
    CHECK(hadamard(Vec{1, 2, 3}, Vec{4, 5, 6}) == Vec{4, 10, 18});
    CHECK(dot(Vec{1, 2}, Vec{3, 4}) == 11);
}

TEST_CASE("IndexSet invariants") {
    IndexSet K(5, {4, 1});
    CHECK(K.members() == std::vector<int>{1, 4});
    CHECK(K.complement() == IndexSet(5, {0, 2, 3}));
    CHECK(K.complement().complement() == K);
    CHECK(K.is_subset_of(IndexSet::full(5)));
    CHECK(IndexSet::empty(5).is_subset_of(K));
    CHECK(!IndexSet(5, {0, 1}).is_subset_of(K));
    CHECK(K.contains(1));
    CHECK(!K.contains(2));
    CHECK(IndexSet::from_mask(5, 0b10010).mask() == 0b10010);
    CHECK_THROWS_AS(IndexSet(3, {3}), std::invalid_argument);
    CHECK_THROWS_AS(IndexSet(3, {1, 1}), std::invalid_argument);
}

TEST_CASE("gather / scatter round trip") {
    Vec x{9, 8, 7, 6};
    IndexSet K(4, {1, 3});
    CHECK(gather(x, K) == Vec{8, 6});
    CHECK(scatter(gather(x, K), K) == project(x, K));
}

TEST_CASE("subset stream: counts, order, uniqueness") {
    // frozen count: sum_{j<=3} C(10,j) = 1 + 10 + 45 + 120
    CHECK(count_subsets_of_size_at_most(10, 3) == 176);
    std::uint64_t seen = 0;
    subsets_of_size_at_most(10, 3, [&](const IndexSet &) { ++seen; });
    CHECK(seen == 176);

    auto all = list_subsets_of_size_at_most(3, 3);
    CHECK(all.size() == 8);
    // lexicographic by member list
    CHECK(all[0] == IndexSet::empty(3));
    CHECK(all[1] == IndexSet(3, {0}));
    CHECK(all[2] == IndexSet(3, {0, 1}));
    CHECK(all[3] == IndexSet(3, {0, 1, 2}));
    CHECK(all[4] == IndexSet(3, {0, 2}));
    CHECK(all[5] == IndexSet(3, {1}));
    CHECK(all[6] == IndexSet(3, {1, 2}));
    CHECK(all[7] == IndexSet(3, {2}));

    auto caps = list_subsets_of_size_at_most(3, 1);
    CHECK(caps.size() == 4);
    CHECK(caps[0].is_empty());
    CHECK(caps[3] == IndexSet(3, {2}));

    // uniqueness via masks
    auto sets = list_subsets_of_size_at_most(12, 4);
    CHECK(sets.size() == count_subsets_of_size_at_most(12, 4));
    std::vector<std::uint32_t> masks;
    for (const auto &K : sets)
        masks.push_back(K.mask());
    std::sort(masks.begin(), masks.end());
    CHECK(std::adjacent_find(masks.begin(), masks.end()) == masks.end());

    CHECK_THROWS_AS(subsets_of_size_at_most(25, 1, [](const IndexSet &) {}),
                    std::invalid_argument);
    CHECK_THROWS_AS(subsets_of_size_at_most(4, 5, [](const IndexSet &) {}),
                    std::invalid_argument);
}

TEST_CASE("check_finite rejects NaN and infinity") {
    CHECK_NOTHROW(check_finite(Vec{1, -2, 0}));
    CHECK_THROWS_AS(check_finite(Vec{1, std::nan("")}),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_finite(Vec{1, 1.0 / 0.0}), std::invalid_argument);
}

TEST_CASE("argmax_abs returns all tied indices") {
    CHECK(argmax_abs(Vec{1, -3, 3}) == std::vector<int>{1, 2});
    CHECK(argmax_abs(Vec{0, 0}) == std::vector<int>{0, 1});
}
