#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdint>
#include <random>
#include <set>

#include "equgen/quasiorder.hpp"
#include "equgen/verify.hpp"

using namespace equgen;

namespace {

// Independent oracle: count reflexive-transitive relations on an n-set
// by filtering every subset of off-diagonal pairs for transitivity,
// written against the (x,y,z) triple definition rather than row masks.
std::uint64_t brute_quo_count(int n) {
    const int m = n * (n - 1);
    std::vector<std::pair<int, int>> offdiag;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (x != y) offdiag.emplace_back(x, y);
    std::uint64_t count = 0;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        bool rel[5][5] = {};
        for (int i = 0; i < n; ++i) rel[i][i] = true;
        for (int b = 0; b < m; ++b)
            if ((mask >> b) & 1) rel[offdiag[(std::size_t)b].first][offdiag[(std::size_t)b].second] = true;
        bool ok = true;
        for (int x = 0; x < n && ok; ++x)
            for (int y = 0; y < n && ok; ++y)
                for (int z = 0; z < n && ok; ++z)
                    if (rel[x][y] && rel[y][z] && !rel[x][z]) ok = false;
        if (ok) ++count;
    }
    return count;
}

// Relational join oracle: (x,y) in join(p,q) iff a directed path from x
// to y exists using edges of p or q.
bool join_oracle(const Quasiorder& p, const Quasiorder& q, int x, int y) {
    const int n = p.size();
    std::vector<char> seen((std::size_t)n, 0);
    std::vector<int> stack = {x};
    seen[(std::size_t)x] = 1;
    while (!stack.empty()) {
        const int c = stack.back();
        stack.pop_back();
        if (c == y) return true;
        for (int i = 0; i < n; ++i) {
            if (seen[(std::size_t)i]) continue;
            if (p.contains(c, i) || q.contains(c, i)) {
                seen[(std::size_t)i] = 1;
                stack.push_back(i);
            }
        }
    }
    return false;
}

Quasiorder random_quo(int n, std::mt19937_64& rng) {
    std::array<std::uint32_t, Quasiorder::max_n> rows{};
    std::uniform_int_distribution<std::uint32_t> d(0, (1u << n) - 1);
    for (int i = 0; i < n; ++i) rows[(std::size_t)i] = d(rng) & ((1u << n) - 1);
    return Quasiorder::from_rows(n, rows);
}

} // namespace

TEST_CASE("construction always closes") {
    std::array<std::uint32_t, Quasiorder::max_n> rows{};
    rows[0] = 1u << 1; // 0 > 1
    rows[1] = 1u << 2; // 1 > 2
    const Quasiorder q = Quasiorder::from_rows(3, rows);
    CHECK(q.is_closed());
    CHECK(q.contains(0, 2)); // transitivity
    CHECK(q.contains(1, 1)); // reflexivity
    CHECK_FALSE(q.contains(2, 0));

    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 200; ++rep) CHECK(random_quo(5, rng).is_closed());
}

TEST_CASE("atoms, meet, join, inverse") {
    const Quasiorder a = qu(4, 0, 1);
    CHECK(a.contains(0, 1));
    CHECK_FALSE(a.contains(1, 0));
    CHECK(inverse(a) == qu(4, 1, 0));
    CHECK(meet(a, inverse(a)) == Quasiorder(4));
    CHECK(join(qu(3, 0, 1), qu(3, 1, 0)) == equ_to_quo(atom(3, 0, 1)));
    // Directed cycle joins to the full relation.
    CHECK(join(join(qu(3, 0, 1), qu(3, 1, 2)), qu(3, 2, 0)) == equ_to_quo(top(3)));

    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 100; ++rep) {
        const Quasiorder p = random_quo(4, rng);
        const Quasiorder q = random_quo(4, rng);
        const Quasiorder j = join(p, q);
        const Quasiorder m = meet(p, q);
        CHECK(m.is_closed());
        CHECK(j.is_closed());
        for (int x = 0; x < 4; ++x)
            for (int y = 0; y < 4; ++y) {
                CHECK(m.contains(x, y) == (p.contains(x, y) && q.contains(x, y)));
                CHECK(j.contains(x, y) == join_oracle(p, q, x, y));
            }
        CHECK(inverse(inverse(p)) == p);
        CHECK(inverse(meet(p, q)) == meet(inverse(p), inverse(q)));
        CHECK(inverse(join(p, q)) == join(inverse(p), inverse(q)));
    }
}

TEST_CASE("equivalence embedding and symmetric part") {
    const Partition p = parse_partition("eq(12;3;45;6)", 6);
    const Quasiorder q = equ_to_quo(p);
    CHECK(quo_is_equivalence(q));
    CHECK(quo_symmetric_part(q) == p);
    CHECK_FALSE(quo_is_equivalence(qu(6, 0, 1)));
    CHECK(quo_symmetric_part(qu(6, 0, 1)) == bottom(6));
    CHECK(quo_symmetric_part(join(qu(4, 0, 1), qu(4, 1, 0))) == atom(4, 0, 1));
}

TEST_CASE("enumeration counts match the brute-force oracle") {
    CHECK(brute_quo_count(3) == 29);
    CHECK(quasiorder_count(3) == 29);
    CHECK(quasiorder_count(4) == 355);
    CHECK(quasiorder_count(1) == 1);
    CHECK(quasiorder_count(2) == 4);
    CHECK(brute_quo_count(4) == 355);

    std::uint64_t seen = 0;
    std::set<std::array<std::uint32_t, Quasiorder::max_n>> distinct;
    enumerate_quasiorders(3, [&](const Quasiorder& q) {
        ++seen;
        CHECK(q.is_closed());
        std::array<std::uint32_t, Quasiorder::max_n> key{};
        for (int i = 0; i < 3; ++i) key[(std::size_t)i] = q.row(i);
        distinct.insert(key);
    });
    CHECK(seen == 29);
    CHECK(distinct.size() == 29);
}

TEST_CASE("both-direction cycle atoms generate the whole quasiorder lattice") {
    for (int n : {3, 4}) {
        std::vector<Quasiorder> gens;
        for (int i = 0; i < n; ++i) {
            gens.push_back(qu(n, i, (i + 1) % n));
            gens.push_back(qu(n, (i + 1) % n, i));
        }
        QuoDomain dom(n);
        const auto out = close_sublattice(
            dom, std::span<const Quasiorder>(gens),
            ClosureTarget<Quasiorder>::fixpoint());
        CHECK(out.elements.size() == quasiorder_count(n));
    }
}

TEST_CASE("text format round trips") {
    std::mt19937_64 rng(23);
    for (int n : {1, 3, 5, 8}) {
        for (int rep = 0; rep < 50; ++rep) {
            const Quasiorder q = random_quo(n, rng);
            CHECK(parse_quasiorder(format_quasiorder(q)) == q);
            // Reduction closes back to the original.
            Quasiorder acc(n);
            for (auto [x, y] : transitive_reduction_pairs(q)) acc = join(acc, qu(n, x, y));
            CHECK(acc == q);
        }
    }
    CHECK(parse_quasiorder(format_quasiorder(Quasiorder(2))) == Quasiorder(2));
    CHECK_THROWS_AS(parse_quasiorder("garbage"), parse_error);
}

TEST_CASE("lattice laws on random quasiorder triples") {
    std::mt19937_64 rng(31);
    for (int n : {3, 5, 7}) {
        for (int rep = 0; rep < 150; ++rep) {
            const Quasiorder a = random_quo(n, rng);
            const Quasiorder b = random_quo(n, rng);
            const Quasiorder c = random_quo(n, rng);
            CHECK(meet(a, b) == meet(b, a));
            CHECK(join(a, b) == join(b, a));
            CHECK(meet(a, meet(b, c)) == meet(meet(a, b), c));
            CHECK(join(a, join(b, c)) == join(join(a, b), c));
            CHECK(meet(a, join(a, b)) == a);
            CHECK(join(a, meet(a, b)) == a);
        }
    }
}
