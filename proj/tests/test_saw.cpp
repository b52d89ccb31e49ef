#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "twospin/errors.hpp"
#include "twospin/generate.hpp"
#include "twospin/saw.hpp"
#include "twospin/spin_system.hpp"
#include "twospin/tree.hpp"

using namespace twospin;

namespace {

SpinSystem make_graph(SpinParams params, std::vector<double> lambdas,
                      std::vector<std::pair<int, int>> edges,
                      std::vector<std::pair<VertexId, int>> pins = {}) {
    std::vector<std::pair<VertexId, double>> vs;
    for (std::size_t v = 0; v < lambdas.size(); ++v)
        vs.emplace_back(static_cast<int>(v), lambdas[v]);
    return SpinSystem(params, vs, edges, pins);
}

void check_saw_exact(const SpinSystem& sys, double tol = 1e-9) {
    for (int v = 0; v < sys.size(); ++v) {
        if (!sys.is_free(v)) continue;
        const double oracle = exact_ratio(sys, sys.id_of(v));
        const double saw = saw_ratio_exact(sys, sys.id_of(v)).value;
        CHECK(saw == doctest::Approx(oracle).epsilon(tol));
    }
}

}  // namespace

TEST_CASE("a tree graph maps to an isomorphic SAW tree") {
    const auto sys = make_graph(SpinParams(0.6, 2), {1.0, 2.0, 0.5, 1.5, 1.0},
                                {{0, 1}, {0, 2}, {1, 3}, {1, 4}});
    const RootedTree tree = build_saw(sys, 0, SawHorizon::full());
    CHECK(tree.size() == 5);
    for (const auto& node : tree.nodes) CHECK(!node.pin.has_value());
    check_saw_exact(sys, 1e-12);
}

TEST_CASE("a single edge reduces to the two-vertex tree recursion") {
    const auto sys = make_graph(SpinParams(0.6, 2), {1.0, 1.0}, {{0, 1}});
    CHECK(saw_ratio_exact(sys, 0).value == doctest::Approx(1.6 / 3.0).epsilon(1e-14));
}

TEST_CASE("triangle: both branches end in cycle-closing pinned leaves") {
    const auto sys = make_graph(SpinParams(1.2, 2), {1.0, 0.7, 1.3}, {{0, 1}, {1, 2}, {0, 2}});
    const RootedTree tree = build_saw(sys, 0, SawHorizon::full());
    CHECK(tree.size() == 7);
    int pinned = 0;
    for (const auto& node : tree.nodes) pinned += node.pin.has_value();
    CHECK(pinned == 2);
    check_saw_exact(sys, 1e-12);
}

TEST_CASE("4-cycle certifies the pin convention") {
    const auto sys =
        make_graph(SpinParams(1.5, 2), {1, 1, 1, 1}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    check_saw_exact(sys, 1e-12);
    CHECK(saw_ratio_exact(sys, 0).probability() ==
          doctest::Approx(0.3798126951092612).epsilon(1e-12));
}

TEST_CASE("cliques") {
    const auto k4 = make_graph(SpinParams(1.2, 2), {1, 1, 1, 1},
                               {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    check_saw_exact(k4, 1e-10);

    std::vector<std::pair<int, int>> k5_edges;
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b) k5_edges.emplace_back(a, b);
    const auto k5 = make_graph(SpinParams(0.8, 1.7), {0.9, 1.1, 1.0, 1.3, 0.5}, k5_edges);
    check_saw_exact(k5, 1e-10);
}

TEST_CASE("petersen graph") {
    const std::vector<std::pair<int, int>> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0},
                                                 {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9},
                                                 {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}};
    const auto sys = make_graph(SpinParams(0.9, 1.8), std::vector<double>(10, 1.0), edges);
    const double oracle = exact_ratio(sys, 0);
    CHECK(saw_ratio_exact(sys, 0).value == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("multigraphs expand parallel edges into distinct children") {
    const auto sys = make_graph(SpinParams(1.3, 1.9), {1.0, 0.8, 1.2},
                                {{0, 1}, {0, 1}, {1, 2}, {2, 0}});
    const RootedTree tree = build_saw(sys, 0, SawHorizon::full());
    CHECK(tree.nodes[tree.root()].children.size() == 3);  // two copies of 1, one of 2
    check_saw_exact(sys, 1e-12);
}

TEST_CASE("graph pins appear as pinned leaves and stop the walk") {
    const auto sys = make_graph(SpinParams(1.5, 2), {1, 1, 1, 1},
                                {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, {{3, 1}});
    check_saw_exact(sys, 1e-12);
    const RootedTree tree = build_saw(sys, 0, SawHorizon::full());
    for (int c : tree.nodes[tree.root()].children) {
        if (tree.nodes[c].graph_vertex == 3) {
            CHECK(tree.nodes[c].pin == 1);
            CHECK(tree.nodes[c].children.empty());
        }
    }
    CHECK_THROWS_AS(build_saw(sys, 3, SawHorizon::full()), regime_error);
}

TEST_CASE("SAW exactness on random graphs") {
    Rng rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        const double b = rng.uniform(0.5, 1.6);
        const SpinParams params(b, rng.uniform(std::max(b, 1.05 / b) + 0.05, 2.6));
        const auto sys =
            random_graph(params, rng.between(3, 9), rng.between(2, 12), 0.3, 3.0, rng,
                         /*pin_fraction=*/0.15);
        int probe = 0;
        while (!sys.is_free(probe)) ++probe;
        const double oracle = exact_ratio(sys, sys.id_of(probe));
        const double saw = saw_ratio_exact(sys, sys.id_of(probe)).value;
        CHECK(saw == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("degree preservation") {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const SpinParams params(1.0, 2.0);
        const auto sys = random_graph(params, 8, rng.between(7, 14), 1.0, 1.0, rng);
        const RootedTree tree = build_saw(sys, 0, SawHorizon::plain(6));
        std::size_t max_children = 0;
        for (const auto& node : tree.nodes)
            max_children = std::max(max_children, node.children.size());
        CHECK(max_children <= static_cast<std::size_t>(sys.max_degree()));
    }
}

TEST_CASE("horizons bound the expansion") {
    // 4-regular-ish graph: expansion must stay near Delta^t (plain) or
    // M^ell * Delta^2 (M-based with its one extra level)
    Rng rng(13);
    const auto sys = random_graph_bounded_degree(SpinParams(1, 2), 30, 60, 4, 1.0, 1.0, rng);
    SUBCASE("plain depth") {
        for (int t = 0; t <= 6; ++t) {
            const RootedTree tree = build_saw(sys, 0, SawHorizon::plain(t));
            double cap = 1;  // sum_{k<=t+1} Delta^k
            double pow = 1;
            for (int k = 1; k <= t + 1; ++k) {
                pow *= 4;
                cap += pow;
            }
            CHECK(tree.size() <= cap);
        }
    }
    SUBCASE("M-based depth with one extra level") {
        const double M = 3.0;
        for (int ell = 0; ell <= 6; ++ell) {
            const RootedTree tree = build_saw(sys, 0, SawHorizon::m_based(ell, M));
            const double cap = std::pow(M, ell) * (4 + 1) * (4 + 1);
            CHECK(tree.size() <= cap);
        }
    }
}

TEST_CASE("node budget is enforced") {
    std::vector<std::pair<int, int>> k7_edges;
    for (int a = 0; a < 7; ++a)
        for (int b = a + 1; b < 7; ++b) k7_edges.emplace_back(a, b);
    const auto sys = make_graph(SpinParams(1.1, 1.5), std::vector<double>(7, 1.0), k7_edges);
    CHECK_THROWS_AS(build_saw(sys, 0, SawHorizon::full(), 50), budget_error);
}
