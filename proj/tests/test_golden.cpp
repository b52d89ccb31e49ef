// Regression against golden files in tests/golden/v1. Values there were
// produced by this code and frozen after checking them against the sources
// described in each test; the tolerances absorb libm drift across platforms.

#include <fstream>

#include "doctest.h"
#include <nlohmann/json.hpp>

#include "twospin/experiments.hpp"
#include "twospin/potentials.hpp"
#include "twospin/spin_system.hpp"

using namespace twospin;
using nlohmann::json;

namespace {

json load(const std::string& name) {
    const std::string path = std::string(TWOSPIN_GOLDEN_DIR) + "/v1/" + name;
    std::ifstream f(path);
    REQUIRE_MESSAGE(f.good(), "missing golden file " << path);
    json j;
    f >> j;
    return j;
}

}  // namespace

TEST_CASE("golden: phi3 certificate") {
    const json g = load("phi3_certificate.json");
    const Phi3Certificate cert =
        make_phi3_certificate(SpinParams(g.at("beta"), g.at("gamma")), g.at("lambda"));
    CHECK(cert.t3 == doctest::Approx(g.at("t3").get<double>()).epsilon(1e-9));
    CHECK(cert.alpha3 == doctest::Approx(g.at("alpha3").get<double>()).epsilon(1e-9));
    CHECK(cert.argmax_degree == g.at("argmax_degree").get<int>());
    CHECK(cert.argmax_x == doctest::Approx(g.at("argmax_x").get<double>()).epsilon(1e-7));
    CHECK(cert.c0 == doctest::Approx(g.at("c0").get<double>()).epsilon(1e-9));
    CHECK(cert.c1_tail == doctest::Approx(g.at("c1_tail").get<double>()).epsilon(1e-9));
    CHECK(cert.concavity_margin ==
          doctest::Approx(g.at("concavity_margin").get<double>()).epsilon(1e-7));
    CHECK(cert.base_m == g.at("base_m").get<int>());
    const auto& pd = g.at("per_degree_max");
    REQUIRE(pd.size() == cert.per_degree_max.size());
    for (std::size_t i = 0; i < pd.size(); ++i) {
        CHECK(cert.per_degree_max[i].value ==
              doctest::Approx(pd[i].at("value").get<double>()).epsilon(1e-8));
    }
}

TEST_CASE("golden: phi2 base selection at beta=1 gamma=2 lambda=10") {
    const json g = load("phi2_base.json");
    const SpinParams params(1, 2);
    const double lambda = g.at("lambda");
    const double alpha = compute_alpha_lambda(params, lambda);
    CHECK(alpha == doctest::Approx(g.at("alpha_lambda").get<double>()).epsilon(1e-9));
    const Phi2Config cfg = phi2_config(params, lambda);
    CHECK(cfg.t == doctest::Approx(g.at("t").get<double>()).epsilon(1e-9));
    REQUIRE(cfg.knots.has_value());
    CHECK(cfg.knots->first == doctest::Approx(g.at("knot0").get<double>()).epsilon(1e-9));
    CHECK(cfg.knots->second == doctest::Approx(g.at("knot1").get<double>()).epsilon(1e-9));
    const BaseSelection sel = select_base_m(params, lambda, alpha);
    CHECK(sel.M == g.at("M").get<int>());
    CHECK(sel.d0 == g.at("d0").get<int>());
}

TEST_CASE("golden: five-seven limits") {
    const json g = load("five_seven.json");
    const FiveSevenReport rep = five_seven_demo(g.at("lambda"));
    REQUIRE(rep.fixed_points.points.size() == g.at("fixed_points").size());
    for (std::size_t i = 0; i < rep.fixed_points.points.size(); ++i)
        CHECK(rep.fixed_points.points[i].x ==
              doctest::Approx(g.at("fixed_points")[i].get<double>()).epsilon(1e-9));
    CHECK(rep.limit_truncated ==
          doctest::Approx(g.at("limit_truncated").get<double>()).epsilon(1e-9));
    CHECK(rep.limit_appended ==
          doctest::Approx(g.at("limit_appended").get<double>()).epsilon(1e-9));
}

TEST_CASE("golden: mixing decay fitted rate") {
    const json g = load("mixing.json");
    const MixingRun run = mixing_decay(SpinParams(g.at("beta"), g.at("gamma")), g.at("lambda"),
                                       g.at("spec"), g.at("ell_lo"), g.at("ell_hi"),
                                       g.at("trials"), g.at("seed").get<std::uint64_t>());
    CHECK(run.fit.slope == doctest::Approx(g.at("slope").get<double>()).epsilon(1e-6));
    CHECK(run.fit.r_squared == doctest::Approx(g.at("r_squared").get<double>()).epsilon(1e-6));
    const auto& disc = g.at("max_discrepancy");
    REQUIRE(disc.size() == run.max_discrepancy.size());
    for (std::size_t i = 0; i < disc.size(); ++i)
        CHECK(run.max_discrepancy[i] ==
              doctest::Approx(disc[i].get<double>()).epsilon(1e-6));
}
