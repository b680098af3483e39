#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "jsjforge/lattice.hpp"

using namespace jsjforge;

namespace {

// Independent oracle: enumerate all integer combinations of the generator
// columns with coefficients in [-box, box] and collect the points landing in
// [-box, box]^n. Two lattices agree on the box iff they have the same span
// (for box large enough relative to the entries involved).
std::set<std::vector<long>> lattice_points_in_box(const IntMat& gens, long box) {
    std::set<std::vector<long>> pts;
    int n = gens.rows(), k = gens.cols();
    std::vector<long> coef(k, -box);
    while (true) {
        IntVec v(n, Int(0));
        for (int c = 0; c < k; ++c)
            for (int r = 0; r < n; ++r) v[r] += Int(coef[c]) * gens.at(r, c);
        bool inside = true;
        std::vector<long> pt(n);
        for (int r = 0; r < n; ++r) {
            if (abs(v[r]) > box) {
                inside = false;
                break;
            }
            pt[r] = (long)v[r].get_si();
        }
        if (inside) pts.insert(pt);
        int i = 0;
        for (; i < k; ++i) {
            if (coef[i] < box) {
                ++coef[i];
                break;
            }
            coef[i] = -box;
        }
        if (i == k) break;
    }
    return pts;
}

IntMat mat2(long a, long b, long c, long d) { return IntMat::from_rows(2, 2, {a, b, c, d}); }

}  // namespace

TEST_CASE("canonicalize: already canonical diagonal") {
    Lattice l = canonicalize(mat2(2, 0, 0, 3), 2);
    CHECK(l.rank() == 2);
    CHECK(l.basis().at(0, 0) == 2);
    CHECK(l.basis().at(1, 1) == 3);
    CHECK(l.basis().at(0, 1) == 0);
    CHECK(l.basis().at(1, 0) == 0);
}

TEST_CASE("canonicalize: dependent columns give rank 1") {
    Lattice l = canonicalize(mat2(2, 4, 4, 8), 2);
    CHECK(l.rank() == 1);
    CHECK(l.basis().at(0, 0) == 2);
    CHECK(l.basis().at(1, 0) == 4);
}

TEST_CASE("canonicalize: HNF of {(6,0),(4,2)} matches box enumeration oracle") {
    IntMat gens = mat2(6, 4, 0, 2);
    Lattice l = canonicalize(gens, 2);
    // Frozen from the box oracle: basis {(2,4),(0,6)}.
    CHECK(l.basis() == mat2(2, 0, 4, 6));
    CHECK(lattice_points_in_box(gens, 12) == lattice_points_in_box(l.basis(), 12));
}

TEST_CASE("canonicalize: idempotent and column-order independent") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + (int)(rng() % 3);
        int k = 1 + (int)(rng() % 4);
        IntMat gens(n, k);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < k; ++c) gens.at(r, c) = Int((long)(rng() % 11)) - 5;
        Lattice l1 = canonicalize(gens, n);
        CHECK(canonicalize(l1.basis(), n) == l1);
        // shuffle columns
        std::vector<int> perm(k);
        for (int i = 0; i < k; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        IntMat shuffled(n, k);
        for (int c = 0; c < k; ++c) shuffled.set_col(c, gens.col(perm[c]));
        CHECK(canonicalize(shuffled, n) == l1);
        // right-multiply by a random unimodular matrix
        IntMat u = IntMat::identity(k);
        for (int step = 0; step < 4; ++step) {
            int i = (int)(rng() % k), j = (int)(rng() % k);
            if (i == j) continue;
            Int q = Int((long)(rng() % 5)) - 2;
            for (int r = 0; r < k; ++r) u.at(r, i) += q * u.at(r, j);
        }
        CHECK(canonicalize(gens.mul(u), n) == l1);
    }
}

TEST_CASE("compare: 2Z in Z has index 2") {
    auto res = compare(Lattice::rank1(2), Lattice::rank1(1));
    CHECK(res.rel == Relation::ProperSub);
    CHECK(res.index.finite);
    CHECK(res.index.index == 2);
}

TEST_CASE("compare: 2Z and 3Z incomparable") {
    CHECK(compare(Lattice::rank1(2), Lattice::rank1(3)).rel == Relation::Incomparable);
}

TEST_CASE("compare: index of 2Z^2 in Z^2 is 4 (coset count oracle)") {
    Lattice a = Lattice::scaled(2, 2);
    Lattice b = Lattice::full(2);
    auto res = compare(a, b);
    CHECK(res.rel == Relation::ProperSub);
    CHECK(res.index.finite);
    // oracle: count residues of [0,2)x[0,2) distinct mod a
    std::set<std::string> residues;
    for (long x = 0; x < 2; ++x)
        for (long y = 0; y < 2; ++y) residues.insert(vec_str(a.coset_rep({Int(x), Int(y)})));
    CHECK(res.index.index == Int((long)residues.size()));
}

TEST_CASE("compare: rank drop gives infinite index") {
    Lattice a(2, IntMat::from_rows(2, 1, {2, 0}));
    auto res = compare(a, Lattice::full(2));
    CHECK(res.rel == Relation::ProperSub);
    CHECK_FALSE(res.index.finite);
}

TEST_CASE("compare: ambient mismatch raises") {
    CHECK_THROWS_AS((void)compare(Lattice::rank1(2), Lattice::full(2)), Error);
}

TEST_CASE("meet_join: gcd/lcm in rank 1") {
    auto [m1, j1] = meet_join(Lattice::rank1(3), Lattice::rank1(5));
    CHECK(m1 == Lattice::rank1(15));
    CHECK(j1 == Lattice::rank1(1));
    auto [m2, j2] = meet_join(Lattice::rank1(4), Lattice::rank1(6));
    CHECK(m2 == Lattice::rank1(12));
    CHECK(j2 == Lattice::rank1(2));
}

TEST_CASE("meet_join: span{(2,0)} and span{(0,3)}") {
    Lattice a(2, IntMat::from_rows(2, 1, {2, 0}));
    Lattice b(2, IntMat::from_rows(2, 1, {0, 3}));
    auto [m, j] = meet_join(a, b);
    CHECK(m.is_trivial());
    CHECK(j == canonicalize(mat2(2, 0, 0, 3), 2));
    // membership brute force on a small box: meet points = common points
    auto pa = lattice_points_in_box(a.basis(), 6);
    auto pb = lattice_points_in_box(b.basis(), 6);
    std::set<std::vector<long>> common;
    for (auto& p : pa)
        if (pb.count(p)) common.insert(p);
    std::set<std::vector<long>> expected{{0, 0}};
    CHECK(common == expected);
}

TEST_CASE("meet_join: lattice order relations hold") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + (int)(rng() % 3);
        auto rand_lat = [&]() {
            IntMat gens(n, 1 + (int)(rng() % 3));
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < gens.cols(); ++c) gens.at(r, c) = Int((long)(rng() % 9)) - 4;
            return canonicalize(gens, n);
        };
        Lattice a = rand_lat(), b = rand_lat();
        auto [m, j] = meet_join(a, b);
        CHECK(a.contains(m));
        CHECK(b.contains(m));
        CHECK(j.contains(a));
        CHECK(j.contains(b));
        // associativity/commutativity up to Equal
        Lattice c = rand_lat();
        CHECK(join(join(a, b), c) == join(a, join(b, c)));
        CHECK(join(a, b) == join(b, a));
        CHECK(meet(meet(a, b), c) == meet(a, meet(b, c)));
        CHECK(meet(a, b) == meet(b, a));
    }
}

TEST_CASE("proper sub implies meet_join is (a, b)") {
    Lattice a = Lattice::rank1(6), b = Lattice::rank1(3);
    auto res = compare(a, b);
    REQUIRE(res.rel == Relation::ProperSub);
    auto [m, j] = meet_join(a, b);
    CHECK(m == a);
    CHECK(j == b);
}

TEST_CASE("coset_rep is a canonical transversal") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        Lattice l = canonicalize(mat2((long)(1 + rng() % 6), (long)(rng() % 6),
                                      (long)(rng() % 6), (long)(1 + rng() % 6)),
                                 2);
        IntVec v{Int((long)(rng() % 40)) - 20, Int((long)(rng() % 40)) - 20};
        IntVec rep = l.coset_rep(v);
        // difference is a member
        IntVec diff{v[0] - rep[0], v[1] - rep[1]};
        CHECK(l.contains(diff));
        // shifting by a lattice vector does not change the rep
        if (l.rank() > 0) {
            IntVec shift = l.basis().col((int)(rng() % l.rank()));
            IntVec v2{v[0] + shift[0], v[1] + shift[1]};
            CHECK(l.coset_rep(v2) == rep);
        }
    }
}

TEST_CASE("intermediate lattices of 6Z are the divisor lattices") {
    auto mids = intermediate_lattices(Lattice::rank1(6), 100);
    CHECK(mids.size() == 4);  // 1,2,3,6
    std::set<long> ds;
    for (auto& l : mids) ds.insert((long)l.basis().at(0, 0).get_si());
    CHECK(ds == std::set<long>{1, 2, 3, 6});
}

TEST_CASE("intermediate lattices in rank 2 contain the bottom and top") {
    Lattice low = canonicalize(mat2(2, 0, 0, 2), 2);
    auto mids = intermediate_lattices(low, 1000);
    // subgroups of (Z/2)^2: 1 trivial + 3 of order 2 + 1 full = 5
    CHECK(mids.size() == 5);
    for (auto& m : mids) {
        CHECK(m.contains(low));
        CHECK(Lattice::full(2).contains(m));
    }
}

TEST_CASE("rational subgroup canonicalization") {
    auto s1 = rational_subgroup({Rat(4), Rat(9)});
    auto s2 = rational_subgroup({Rat(36), Rat(9)});
    CHECK(s1 == s2);  // <4,9> = <36,9>
    auto s3 = rational_subgroup({Rat(2), Rat(9)});
    CHECK_FALSE(s1 == s3);
    auto s4 = rational_subgroup({Rat(10, 21)});
    auto s5 = rational_subgroup({Rat(21, 10)});
    CHECK(s4 == s5);
}
