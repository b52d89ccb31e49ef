#include <cmath>
#include <vector>

#include "doctest.h"
#include "twospin/errors.hpp"
#include "twospin/generate.hpp"
#include "twospin/json_io.hpp"
#include "twospin/spin_system.hpp"

using namespace twospin;

namespace {

SpinSystem make_simple(SpinParams params, int n, std::vector<std::pair<int, int>> edges,
                       double lambda = 1.0,
                       std::vector<std::pair<VertexId, int>> pins = {}) {
    std::vector<std::pair<VertexId, double>> vs;
    for (int v = 0; v < n; ++v) vs.emplace_back(v, lambda);
    return SpinSystem(params, vs, edges, pins);
}

// direct product-sum evaluation in plain arithmetic, independent of the
// log-space path
double direct_partition(const SpinSystem& sys) {
    std::vector<int> free_vs;
    for (int v = 0; v < sys.size(); ++v)
        if (sys.is_free(v)) free_vs.push_back(v);
    Configuration sigma(sys.size(), 1);
    for (int v = 0; v < sys.size(); ++v)
        if (!sys.is_free(v)) sigma[v] = *sys.pin(v);
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << free_vs.size()); ++mask) {
        for (std::size_t i = 0; i < free_vs.size(); ++i)
            sigma[free_vs[i]] = (mask >> i) & 1ULL ? 1 : 0;
        double w = 1.0;
        for (const auto& e : sys.edges()) {
            if (sigma[e[0]] == 0 && sigma[e[1]] == 0) w *= sys.params().beta;
            if (sigma[e[0]] == 1 && sigma[e[1]] == 1) w *= sys.params().gamma;
        }
        for (int v = 0; v < sys.size(); ++v)
            if (sigma[v] == 0) w *= sys.lambda(v);
        total += w;
    }
    return total;
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(SpinParams(0.5, 1.0), regime_error);   // anti-ferromagnetic
    CHECK_THROWS_AS(SpinParams(-1.0, 2.0), regime_error);
    CHECK_NOTHROW(SpinParams(0.6, 2.0));
    CHECK_NOTHROW(SpinParams(2.0, 0.6));  // unordered is fine at the type level
}

TEST_CASE("weight examples") {
    SUBCASE("single vertex, field 2, spin 0") {
        const auto sys = make_simple(SpinParams(2, 2), 1, {}, 2.0);
        CHECK(weight(sys, {0}).value() == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(weight(sys, {1}).value() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("K2 monochromatic configurations") {
        const auto sys = make_simple(SpinParams(0.6, 2), 2, {{0, 1}});
        CHECK(weight(sys, {1, 1}).value() == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(weight(sys, {0, 0}).value() == doctest::Approx(0.6).epsilon(1e-14));
        CHECK(weight(sys, {0, 1}).value() == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("zero field zeroes the weight exactly") {
        const SpinSystem sys(SpinParams(2, 3), {{0, 0.0}}, {});
        CHECK(weight(sys, {0}).zero_flag);
        CHECK(weight(sys, {0}).value() == 0.0);
        CHECK_FALSE(weight(sys, {1}).zero_flag);
    }
}

TEST_CASE("exact partition examples") {
    CHECK(std::exp(exact_partition(make_simple(SpinParams(2, 2), 1, {}, 2.0))) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::exp(exact_partition(make_simple(SpinParams(0.6, 2), 2, {{0, 1}}))) ==
          doctest::Approx(4.6).epsilon(1e-12));
    CHECK(std::exp(exact_partition(
              make_simple(SpinParams(2, 2), 3, {{0, 1}, {1, 2}, {0, 2}}))) ==
          doctest::Approx(28.0).epsilon(1e-12));
}

TEST_CASE("log-sum-exp partition matches the direct product-sum") {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const double b = rng.uniform(0.5, 2.0);
        const SpinParams params(b, rng.uniform(std::max(b, 1.05 / b) + 0.05, 3.0));
        const int n = rng.between(2, 10);
        const auto sys = random_graph(params, n, rng.between(1, 2 * n), 0.3, 4.0, rng,
                                      /*pin_fraction=*/0.2);
        const double direct = direct_partition(sys);
        CHECK(std::exp(exact_partition(sys)) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("weight accumulator reproduces the plain product to 1e-12") {
    Rng rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const double b = rng.uniform(0.5, 2.0);
        const SpinParams params(b, rng.uniform(std::max(b, 1.05 / b) + 0.05, 3.0));
        const int n = rng.between(1, 12);
        const auto sys = random_graph(params, n, rng.between(0, 2 * n), 0.2, 4.0, rng);
        Configuration sigma(n);
        for (int v = 0; v < n; ++v) sigma[v] = rng.between(0, 1);
        double direct = 1.0;
        for (const auto& e : sys.edges()) {
            if (sigma[e[0]] == 0 && sigma[e[1]] == 0) direct *= params.beta;
            if (sigma[e[0]] == 1 && sigma[e[1]] == 1) direct *= params.gamma;
        }
        for (int v = 0; v < n; ++v)
            if (sigma[v] == 0) direct *= sys.lambda(v);
        CHECK(weight(sys, sigma).value() == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("huge fields survive in log scale") {
    const auto sys = make_simple(SpinParams(0.6, 2), 3, {{0, 1}, {1, 2}}, 1002762.0);
    const double log_z = exact_partition(sys);
    CHECK(std::isfinite(log_z));
    // dominated by the all-zero configuration: beta^2 lambda^3
    const double lead = 2 * std::log(0.6) + 3 * std::log(1002762.0);
    CHECK(log_z == doctest::Approx(lead).epsilon(1e-6));
}

TEST_CASE("exact marginal examples") {
    SUBCASE("single vertex") {
        CHECK(exact_marginal(make_simple(SpinParams(2, 2), 1, {}, 2.0), 0) ==
              doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("Ising symmetry gives 1/2 everywhere") {
        const auto sys =
            make_simple(SpinParams(1.7, 1.7), 5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
        for (int v = 0; v < 5; ++v)
            CHECK(exact_marginal(sys, v) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("4-cycle, beta=1.5, gamma=2") {
        const auto sys = make_simple(SpinParams(1.5, 2), 4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
        // frozen from an independent enumeration of the 16 configurations
        CHECK(exact_marginal(sys, 0) ==
              doctest::Approx(0.3798126951092612).epsilon(1e-12));
    }
    SUBCASE("spin-0 and spin-1 marginals sum to one") {
        Rng rng(5);
        for (int trial = 0; trial < 10; ++trial) {
            const double b = rng.uniform(0.6, 1.8);
            const SpinParams params(b, rng.uniform(std::max(b, 1.05 / b) + 0.05, 2.8));
            const auto sys = random_graph(params, 7, 9, 0.3, 3.0, rng);
            const double p0 = exact_marginal(sys, 0);
            const auto pinned1 = sys.with_pin(0, 1);
            const double p1 = std::exp(exact_partition(pinned1) - exact_partition(sys));
            CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("pinned weight equals unpinned weight of the matching configuration") {
    const auto pinned = make_simple(SpinParams(1.2, 1.4), 3, {{0, 1}, {1, 2}}, 2.0, {{1, 0}});
    const auto plain = make_simple(SpinParams(1.2, 1.4), 3, {{0, 1}, {1, 2}}, 2.0);
    const Configuration sigma{1, 0, 1};
    CHECK(weight(pinned, sigma).value() ==
          doctest::Approx(weight(plain, sigma).value()).epsilon(1e-14));
}

TEST_CASE("oracle guard and pinned-vertex errors") {
    std::vector<std::pair<VertexId, double>> vs;
    for (int v = 0; v < kOracleFreeLimit + 1; ++v) vs.emplace_back(v, 1.0);
    const SpinSystem big(SpinParams(1.5, 1.5), vs, {});
    CHECK_THROWS_AS(exact_partition(big), budget_error);

    const auto pinned = make_simple(SpinParams(2, 2), 2, {{0, 1}}, 1.0, {{0, 1}});
    CHECK_THROWS_AS(exact_marginal(pinned, 0), regime_error);
    CHECK_NOTHROW(exact_marginal(pinned, 1));
}

TEST_CASE("random cluster split") {
    SUBCASE("K2 worked example") {
        const auto sys = make_simple(SpinParams(2, 3), 2, {{0, 1}});
        const auto split = random_cluster_split(sys, 0);
        CHECK(std::exp(exact_partition(sys)) == doctest::Approx(7.0).epsilon(1e-12));
        CHECK(std::exp(exact_partition(split.minus)) == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(std::exp(exact_partition(split.plus)) == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("beta=1 contraction forbids spin 0 at the merged vertex") {
        const auto sys = make_simple(SpinParams(1, 2), 2, {{0, 1}});
        const auto split = random_cluster_split(sys, 0);
        const int merged = split.plus.index_of(split.contracted);
        CHECK(split.plus.lambda(merged) == 0.0);
        CHECK(std::exp(exact_partition(split.plus)) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("identity on random graphs, including multigraphs") {
        Rng rng(23);
        for (int trial = 0; trial < 30; ++trial) {
            const SpinParams params(rng.uniform(1.0, 2.0), rng.uniform(1.3, 3.0));
            const auto sys = random_graph(params, 8, rng.between(5, 16), 0.3, 3.0, rng);
            const int e = static_cast<int>(rng.below(sys.edge_count()));
            const auto split = random_cluster_split(sys, e);
            const double log_z = exact_partition(sys);
            const double share = std::exp(exact_partition(split.minus) - log_z) +
                                 (params.gamma - 1.0) *
                                     std::exp(exact_partition(split.plus) - log_z);
            CHECK(std::abs(share - 1.0) < 1e-12);
        }
    }
    SUBCASE("contracting a doubled edge leaves a self-loop, identity still holds") {
        const auto sys = make_simple(SpinParams(1.4, 1.6), 2, {{0, 1}, {0, 1}});
        const auto split = random_cluster_split(sys, 0);
        CHECK(split.plus.edge_count() == 1);  // the surviving copy, now a loop
        const double log_z = exact_partition(sys);
        const double share = std::exp(exact_partition(split.minus) - log_z) +
                             0.6 * std::exp(exact_partition(split.plus) - log_z);
        CHECK(std::abs(share - 1.0) < 1e-12);
    }
    SUBCASE("gamma=1 rejected") {
        const auto sys = make_simple(SpinParams(2, 1), 2, {{0, 1}});
        CHECK_THROWS_AS(random_cluster_split(sys, 0), regime_error);
    }
    SUBCASE("beta<1 rejected: the contracted field would be negative") {
        const auto sys = make_simple(SpinParams(0.9, 2), 2, {{0, 1}});
        CHECK_THROWS_AS(random_cluster_split(sys, 0), regime_error);
    }
}

TEST_CASE("marginal bound sweep") {
    SUBCASE("Ising at lambda=1 saturates the bound exactly") {
        const auto rep = marginal_bound_sweep(SpinParams(2, 2), 1.0, 40, 8, 7);
        CHECK(rep.violations == 0);
        CHECK(rep.bound == doctest::Approx(0.5));
        CHECK(rep.max_marginal == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("beta=1.2 gamma=3 lambda=2") {
        const auto rep = marginal_bound_sweep(SpinParams(1.2, 3), 2.0, 60, 9, 8);
        CHECK(rep.violations == 0);
        CHECK(rep.max_marginal <= 2.0 / 3.0 + 1e-12);
    }
    SUBCASE("beta=1 leaves lambda unconstrained") {
        const auto rep = marginal_bound_sweep(SpinParams(1, 2), 5.0, 60, 9, 9);
        CHECK(rep.violations == 0);
        CHECK(rep.max_marginal <= 5.0 / 6.0 + 1e-12);
    }
    SUBCASE("out-of-regime parameters are rejected") {
        CHECK_THROWS_AS(marginal_bound_sweep(SpinParams(0.9, 2), 1.0, 5, 6, 1), regime_error);
        CHECK_THROWS_AS(marginal_bound_sweep(SpinParams(1.5, 2), 3.0, 5, 6, 1), regime_error);
    }
}

TEST_CASE("graph JSON round-trip and validation") {
    const std::string doc = R"({
        "beta": 0.6, "gamma": 2.0,
        "vertices": [{"id": 0, "lambda": 1.0}, {"id": 5, "lambda": 2.5}],
        "edges": [[0, 5]],
        "pins": [{"id": 5, "spin": 1}]
    })";
    const SpinSystem sys = system_from_json_text(doc);
    CHECK(sys.size() == 2);
    CHECK(sys.lambda(sys.index_of(5)) == 2.5);
    CHECK(*sys.pin(sys.index_of(5)) == 1);
    const SpinSystem round = system_from_json_text(system_to_json_text(sys));
    CHECK(exact_partition(round) == doctest::Approx(exact_partition(sys)).epsilon(1e-15));

    CHECK_THROWS_AS(system_from_json_text("{"), parse_error);
    CHECK_THROWS_AS(system_from_json_text(R"({"beta":2,"gamma":2,"vertices":[],"edges":[[0,1]]})"),
                    parse_error);
    CHECK_THROWS_AS(
        system_from_json_text(
            R"({"beta":2,"gamma":2,"vertices":[{"id":0,"lambda":1}],"edges":[[0,0]]})"),
        parse_error);  // self-loop rejected on input
}
