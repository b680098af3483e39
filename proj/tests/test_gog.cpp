#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "jsjforge/gog.hpp"

using namespace jsjforge;

TEST_CASE("parse: BS(2,2) loop graph") {
    Graph g = parse_graph("vertex v 1\nloop e v [2:2]\n");
    CHECK(g.vertices().size() == 1);
    CHECK(g.edges().size() == 1);
    EdgeId e = *g.edge_by_name("e");
    CHECK(g.is_loop(e));
    CHECK(g.label_initial({e, false}) == 2);
    CHECK(g.label_initial({e, true}) == 2);
}

TEST_CASE("parse: figure-2 style graph with loop and pendant") {
    Graph g = parse_graph(
        "vertex v 1\n"
        "vertex z 1\n"
        "loop e v [1:6]\n"
        "edge f v z [5:2]\n");
    CHECK(g.vertices().size() == 2);
    CHECK(g.edges().size() == 2);
    EdgeId f = *g.edge_by_name("f");
    CHECK(g.label_initial({f, false}) == 5);
    CHECK(g.label_initial({f, true}) == 2);
}

TEST_CASE("parse: rank-2 loop with identity matrices") {
    Graph g = parse_graph(
        "vertex v 2\n"
        "loop e v matrix 2 2 1 0 0 1 matrix 2 2 1 0 0 1\n");
    EdgeId e = *g.edge_by_name("e");
    CHECK(g.edge(e).edge_rank == 2);
    CHECK(g.image_initial({e, false}).is_full());
}

TEST_CASE("parse: rejects bad input") {
    CHECK_THROWS_AS((void)parse_graph("vertex v 1\nloop e v [0:2]\n"), Error);
    CHECK_THROWS_AS((void)parse_graph("vertex v 1\nvertex w 1\n"), Error);  // disconnected
    CHECK_THROWS_AS(
        (void)parse_graph("vertex v 2\nloop e v matrix 2 2 1 0 2 0 matrix 2 2 1 0 0 1\n"),
        Error);  // rank-deficient
    CHECK_THROWS_AS((void)parse_graph("gibberish\n"), Error);
    CHECK_THROWS_AS((void)parse_graph("vertex v 1\nedge e v w [2:2]\n"), Error);
}

TEST_CASE("sign normalization stores positive first label") {
    Graph g = parse_graph("vertex v 1\nvertex w 1\nedge e v w [-2:3]\n");
    EdgeId e = *g.edge_by_name("e");
    CHECK(g.label_initial({e, false}) == 2);
    CHECK(g.label_initial({e, true}) == -3);
}

TEST_CASE("canonical_key: vertex renaming does not matter") {
    Graph a = parse_graph("vertex v 1\nloop e v [2:2]\n");
    Graph b = parse_graph("vertex w 1\nloop f w [2:2]\n");
    CHECK(canonical_key(a).bytes == canonical_key(b).bytes);
}

TEST_CASE("canonical_key: simultaneous sign flip is a symmetry, single flip is not") {
    Graph a = parse_graph("vertex v 1\nloop e v [2:3]\n");
    Graph b = parse_graph("vertex v 1\nloop e v [-2:-3]\n");
    Graph c = parse_graph("vertex v 1\nloop e v [2:-3]\n");
    CHECK(canonical_key(a).bytes == canonical_key(b).bytes);
    CHECK(canonical_key(a).bytes != canonical_key(c).bytes);
}

TEST_CASE("canonical_key: figure-1 slide changes the key") {
    Graph left = parse_graph(
        "vertex u 1\nvertex v 1\nvertex w 1\n"
        "edge a u v [2:6]\nedge e v w [3:2]\n");
    Graph right = parse_graph(
        "vertex u 1\nvertex v 1\nvertex w 1\n"
        "edge a u w [2:4]\nedge e v w [3:2]\n");
    CHECK(canonical_key(left).bytes != canonical_key(right).bytes);
}

TEST_CASE("canonical_key: orientation flip and vertex sign flips are symmetries") {
    Graph a = parse_graph("vertex u 1\nvertex w 1\nedge e u w [2:6]\nedge f u w [3:5]\n");
    Graph b = parse_graph("vertex u 1\nvertex w 1\nedge e w u [6:2]\nedge f w u [5:3]\n");
    CHECK(canonical_key(a).bytes == canonical_key(b).bytes);
    // flipping all labels at vertex u (generator change of G_u)
    Graph c = parse_graph("vertex u 1\nvertex w 1\nedge e u w [-2:6]\nedge f u w [-3:5]\n");
    CHECK(canonical_key(a).bytes == canonical_key(c).bytes);
}

TEST_CASE("canonical_key: rank-2 unimodular recoordinatization is a symmetry") {
    Graph a = parse_graph(
        "vertex v 2\nvertex w 1\n"
        "edge e v w matrix 2 1 2 0 matrix 1 1 3\n"
        "edge f v w matrix 2 1 0 5 matrix 1 1 7\n");
    // recoordinatize G_v by U = [[1,0],[1,1]] acting on all columns at v
    Graph b = parse_graph(
        "vertex v 2\nvertex w 1\n"
        "edge e v w matrix 2 1 2 2 matrix 1 1 3\n"
        "edge f v w matrix 2 1 0 5 matrix 1 1 7\n");
    CHECK(canonical_key(a).bytes == canonical_key(b).bytes);
    // a genuinely different lattice pattern differs
    Graph c = parse_graph(
        "vertex v 2\nvertex w 1\n"
        "edge e v w matrix 2 1 2 0 matrix 1 1 3\n"
        "edge f v w matrix 2 1 0 4 matrix 1 1 7\n");
    CHECK(canonical_key(a).bytes != canonical_key(c).bytes);
}

TEST_CASE("serialize round-trips through parse on the canonical form") {
    std::vector<std::string> fixtures = {
        "vertex v 1\nloop e v [2:2]\n",
        "vertex v 1\nvertex z 1\nloop e v [1:6]\nedge f v z [5:2]\n",
        "vertex u 1\nvertex v 1\nvertex w 1\nedge a u v [2:6]\nedge e v w [3:2]\n",
        "vertex v 2\nloop e v matrix 2 2 1 0 0 1 matrix 2 2 1 0 0 1\n",
    };
    for (auto& text : fixtures) {
        Graph g = parse_graph(text);
        std::string s1 = serialize_graph(g);
        Graph g2 = parse_graph(s1);
        CHECK(canonical_key(g).bytes == canonical_key(g2).bytes);
        CHECK(serialize_graph(g2) == s1);
    }
}

TEST_CASE("cycle_invariants: BS(2,4)") {
    Graph g = parse_graph("vertex v 1\nloop e v [2:4]\n");
    auto inv = cycle_invariants(g);
    CHECK(inv.betti == 1);
    REQUIRE(inv.has_modulus);
    REQUIRE(inv.modulus_generators.size() == 1);
    CHECK(inv.modulus_generators[0] == Rat(2));
}

TEST_CASE("cycle_invariants: figure-2 graph has modulus {6}") {
    Graph g = parse_graph("vertex v 1\nvertex z 1\nloop e v [1:6]\nedge f v z [5:2]\n");
    auto inv = cycle_invariants(g);
    CHECK(inv.betti == 1);
    REQUIRE(inv.modulus_generators.size() == 1);
    CHECK(inv.modulus_generators[0] == Rat(6));
}

TEST_CASE("cycle_invariants: figure-3 graph has modulus 10/21 up to inversion") {
    Graph g = parse_graph(
        "vertex v 1\nvertex p 1\nvertex q 1\n"
        "edge e v p [3:2]\nedge f v p [5:7]\nedge h p q [14:2]\n");
    auto inv = cycle_invariants(g);
    CHECK(inv.betti == 1);
    REQUIRE(inv.modulus_generators.size() == 1);
    CHECK(inv.modulus_generators[0] == Rat(21, 10));  // normalized generator of <10/21>
    CHECK(inv.modulus_subgroup == rational_subgroup({Rat(10, 21)}));
}

TEST_CASE("cycle_invariants: rank-2 graph reports betti only") {
    Graph g = parse_graph("vertex v 2\nloop e v matrix 2 2 1 0 0 1 matrix 2 2 1 0 0 1\n");
    auto inv = cycle_invariants(g);
    CHECK(inv.betti == 1);
    CHECK_FALSE(inv.has_modulus);
}

TEST_CASE("dot export mentions labels") {
    Graph g = parse_graph("vertex v 1\nloop e v [2:4]\n");
    std::string dot = to_dot(g);
    CHECK(dot.find("2:4") != std::string::npos);
}

TEST_CASE("canonical_key stable under random relabelling") {
    std::mt19937 rng(23);
    Graph g = parse_graph(
        "vertex v 1\nvertex p 1\nvertex q 1\n"
        "edge e v p [3:2]\nedge f v p [5:7]\nedge h p q [14:2]\n");
    std::string base = canonical_key(g).bytes;
    const char* names[] = {"a", "b", "c"};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::string> perm = {names[0], names[1], names[2]};
        std::shuffle(perm.begin(), perm.end(), rng);
        auto flip = [&](long m, long n, std::string a, std::string b, std::string nm) {
            std::ostringstream os;
            long s = (rng() % 2) ? 1 : -1;
            if (rng() % 2)
                os << "edge " << nm << " " << a << " " << b << " [" << s * m << ":" << s * n
                   << "]\n";
            else
                os << "edge " << nm << " " << b << " " << a << " [" << s * n << ":" << s * m
                   << "]\n";
            return os.str();
        };
        std::string text = "vertex " + perm[0] + " 1\nvertex " + perm[1] + " 1\nvertex " +
                           perm[2] + " 1\n" + flip(3, 2, perm[0], perm[1], "x") +
                           flip(5, 7, perm[0], perm[1], "y") + flip(14, 2, perm[1], perm[2], "z");
        CHECK(canonical_key(parse_graph(text)).bytes == base);
    }
}
