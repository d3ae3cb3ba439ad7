#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "tasep/partitions.hpp"

using namespace tasep;

namespace {

// Column counts read off an explicit cell set.
Partition conjugate_by_cells(const Partition& p) {
    std::set<Cell> cells;
    for (int i = 1; i <= p.length(); ++i)
        for (int j = 1; j <= p[i]; ++j) cells.insert({i, j});
    std::vector<int> cols;
    for (int j = 1;; ++j) {
        int c = 0;
        for (const auto& cell : cells)
            if (cell.col == j) ++c;
        if (c == 0) break;
        cols.push_back(c);
    }
    return Partition(cols);
}

}  // namespace

TEST_CASE("partition construction and indexing") {
    Partition p{3, 3, 1, 0, 0};
    CHECK(p.length() == 3);
    CHECK(p.size() == 7);
    CHECK(p[1] == 3);
    CHECK(p[4] == 0);
    CHECK(p.str() == "[3,3,1]");
    CHECK_THROWS_AS(Partition({1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(Partition({1, -1}), std::invalid_argument);
    CHECK(parse_partition("[3,3,1]") == p);
    CHECK(parse_partition("[]") == Partition{});
    CHECK_THROWS(parse_partition("[1,2]"));
    CHECK_THROWS(parse_partition("[a]"));
}

TEST_CASE("conjugate") {
    CHECK(conjugate({3, 3, 1}) == Partition{3, 2, 2});
    CHECK(conjugate({}) == Partition{});
    CHECK(conjugate_by_cells({4, 3}) == Partition{2, 2, 2, 1});
    CHECK(conjugate({4, 3}) == Partition{2, 2, 2, 1});
    for (const auto& p : partitions_in_box(8, 8)) {
        REQUIRE(conjugate(conjugate(p)) == p);
        REQUIRE(conjugate(p) == conjugate_by_cells(p));
    }
}

TEST_CASE("containment and skew shapes") {
    CHECK(contains({2, 1}, {1, 1}));
    CHECK_FALSE(contains({2, 1}, {1, 1, 1}));
    CHECK(contains({3, 3, 1}, {3, 2}));
    SkewShape s({3, 1}, {1});
    CHECK(s.cells() == std::vector<Cell>{{1, 2}, {1, 3}, {2, 1}});
    CHECK_THROWS_AS(SkewShape({1}, {2}), std::invalid_argument);
}

TEST_CASE("corners") {
    CHECK(corners({1, 1}) == std::vector<Cell>{{2, 1}});
    CHECK(corners({3, 3, 1}) == std::vector<Cell>{{2, 3}, {3, 1}});
    CHECK(corners({}).empty());
}

TEST_CASE("strips") {
    CHECK(is_vertical_strip(SkewShape({2, 2}, {1, 1})));
    CHECK_FALSE(is_vertical_strip(SkewShape({3, 1}, {1})));
    CHECK(is_vertical_strip(SkewShape({2, 1}, {1})));
    CHECK(is_horizontal_strip(SkewShape({2, 1}, {1})));
    CHECK_FALSE(is_vertical_strip(SkewShape({2, 1})));
    CHECK_FALSE(is_horizontal_strip(SkewShape({2, 1})));
    // Vertical strip of lambda/mu iff horizontal strip of the conjugates.
    auto box = partitions_in_box(5, 5);
    for (const auto& l : box)
        for (const auto& m : box) {
            if (!contains(l, m)) continue;
            REQUIRE(is_vertical_strip(SkewShape(l, m)) == is_horizontal_strip(SkewShape(conjugate(l), conjugate(m))));
        }
}

TEST_CASE("push closure") {
    auto r = push_closure({4, 1, 1, 1}, 4);
    CHECK(r.result == Partition{4, 2, 2, 2});
    CHECK(r.pushed_rows == std::vector<int>{2, 3});
    r = push_closure({2, 1}, 1);
    CHECK(r.result == Partition{3, 1});
    CHECK(r.pushed_rows.empty());
    r = push_closure({1, 1, 1}, 3);
    CHECK(r.result == Partition{2, 2, 2});
    CHECK(r.pushed_rows == std::vector<int>{1, 2});

    // Output contains p + e_j and dropping any pushed box breaks the partition condition.
    for (const auto& p : partitions_in_box(4, 4))
        for (int j = 1; j <= 5; ++j) {
            auto res = push_closure(p, j);
            auto target = p.padded(j);
            ++target[j - 1];
            for (int i = 1; i <= j; ++i) REQUIRE(res.result[i] >= target[i - 1]);
            for (int k : res.pushed_rows) {
                auto v = res.result.padded(j);
                --v[k - 1];
                CHECK_THROWS(Partition(v));
            }
        }
}

TEST_CASE("enumeration helpers") {
    CHECK(partitions_in_box(2, 2).size() == 6);
    CHECK(partitions_between({1}, {2, 1}).size() == 4);
    CHECK(corner_removals({2, 1}).size() == 4);
    Partition out;
    CHECK(add_box({2, 1}, 2, out));
    CHECK(out == Partition{2, 2});
    CHECK_FALSE(add_box({1, 1}, 2, out));
}
