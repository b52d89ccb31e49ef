#include "twospin/fptas.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twospin/errors.hpp"
#include "twospin/saw.hpp"
#include "twospin/thresholds.hpp"
#include "twospin/tree.hpp"

namespace twospin {

ApproxMode parse_mode(const std::string& name) {
    if (name == "bounded") return ApproxMode::bounded;
    if (name == "universal") return ApproxMode::universal;
    if (name == "auto") return ApproxMode::automatic;
    throw parse_error("unknown mode '" + name + "' (expected auto|bounded|universal)");
}

namespace {

// C_total: boundary constant c2/c1 times the root correction of the plain
// recursion step, with beta^d damping only when beta > 1
double depth_constant(const Potential& pot, SpinParams params, double lambda, int degree_hint) {
    const double beta_amp = std::pow(std::max(1.0, params.beta), degree_hint);
    const double root_factor = std::max(
        1.0, degree_hint * lambda * (params.beta * params.gamma - 1.0) / params.gamma * beta_amp);
    return (pot.c2 / pot.c1) * beta_amp * root_factor;
}

}  // namespace

int select_depth(const Potential& pot, SpinParams params, double lambda, double eps_additive,
                 int degree_hint) {
    if (!(pot.alpha < 1.0)) throw regime_error("select_depth requires alpha < 1");
    const double c_total = depth_constant(pot, params, lambda, degree_hint);
    if (c_total * lambda <= eps_additive) return 0;
    const double raw =
        (std::log(eps_additive) - std::log(c_total * lambda)) / std::log(pot.alpha);
    int t = std::max(0, static_cast<int>(std::ceil(raw)));
    while (c_total * lambda * std::pow(pot.alpha, t) > eps_additive) ++t;
    return t;
}

MarginalBounds approx_marginal(const SpinSystem& sys, VertexId v, double eps_additive,
                               const Potential& pot, std::size_t node_budget) {
    const double lambda = std::max(sys.max_lambda(), sys.lambda(sys.index_of(v)));
    const int degree_hint = std::max(1, sys.max_degree());
    double eps_for_depth = eps_additive;
    if (pot.kind == Potential::Kind::good) {
        // a good potential declares phi bounds on the envelope of the largest
        // field only; non-uniform or pin-absorbed fields widen that envelope
        // by the spread below, so the depth target shrinks accordingly
        double lam_min = lambda;
        for (int u = 0; u < sys.size(); ++u)
            if (sys.is_free(u) && sys.lambda(u) > 0.0)
                lam_min = std::min(lam_min, sys.lambda(u));
        const double per_level = sys.params().gamma * std::max(1.0, sys.params().beta);
        const double spread =
            (lambda / lam_min) * std::pow(per_level, degree_hint);
        eps_for_depth = eps_additive / spread;
    }
    const int t = select_depth(pot, sys.params(), lambda, eps_for_depth, degree_hint);
    const SawHorizon horizon = pot.kind == Potential::Kind::good
                                   ? SawHorizon::plain(t)
                                   : SawHorizon::m_based(t, pot.base_m);
    RootedTree tree = build_saw(sys, v, horizon, node_budget);
    MarginalBounds out;
    out.depth_used = t;
    out.nodes_expanded = tree.nodes.size();
    const RootedTree clean = absorb_pins(tree, sys.params());
    const BoundsPair bounds = bounds_recursion(clean, sys.params());
    out.p_lower = bounds.lower.probability();
    out.p_upper = bounds.upper.probability();
    return out;
}

namespace {

ApproxResult run_self_reduction(SpinSystem sys, double epsilon, const Potential& pot,
                                const std::string& mode_name, std::size_t node_budget) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw regime_error("epsilon must lie in (0,1), got " + std::to_string(epsilon));
    ApproxResult out;
    out.epsilon = epsilon;
    out.mode = mode_name;
    const int n = sys.size();
    const double eps_step = std::min(epsilon / (3.0 * std::max(1, n)), 1.0 / 12.0);
    double log_probs = 0.0;
    for (int i = 0; i < n; ++i) {
        const VertexId v = sys.id_of(i);
        if (!sys.is_free(sys.index_of(v))) continue;
        const MarginalBounds mb = approx_marginal(sys, v, eps_step, pot, node_budget);
        out.depths.push_back(mb.depth_used);
        out.nodes_expanded += mb.nodes_expanded;
        const double mid = mb.midpoint();
        const int spin = mid >= 0.5 ? 0 : 1;
        const double p_hat = spin == 0 ? mid : 1.0 - mid;
        log_probs += std::log(p_hat);
        sys = sys.with_pin(v, spin);
    }
    // every vertex is now pinned; the weight of that single configuration
    // divided by the chain of conditional probabilities is Z
    Configuration sigma(sys.size());
    for (int i = 0; i < sys.size(); ++i) sigma[i] = *sys.pin(i);
    const WeightAccumulator w = weight(sys, sigma);
    if (w.zero_flag)
        throw regime_error("self-reduction pinned a zero-weight configuration");
    out.log_z = w.log_weight - log_probs;
    return out;
}

}  // namespace

ApproxResult approx_partition(const ApproxRequest& request) {
    const SpinSystem& sys = request.system;
    const SpinParams params = sys.params();
    const double dc = delta_c(params);
    const int max_deg = sys.max_degree();
    const bool bounded_ok = max_deg - 1 < dc;
    const bool params_universal = params.beta <= 1.0 && params.gamma > 1.0;
    const double lc = params.beta <= params.gamma ? lambda_c(params) : 0.0;
    const bool fields_below_critical = params_universal && sys.max_lambda() < lc;

    ApproxMode mode = request.mode;
    if (mode == ApproxMode::automatic) {
        if (bounded_ok)
            mode = ApproxMode::bounded;
        else if (params_universal && fields_below_critical)
            mode = ApproxMode::universal;
        else
            throw regime_error(
                "no regime applies: max degree " + std::to_string(max_deg) + " >= delta_c+1 = " +
                std::to_string(dc + 1.0) + " and universal preconditions fail (need beta <= 1 < "
                "gamma and all fields < lambda_c)");
    }

    if (mode == ApproxMode::bounded) {
        if (!bounded_ok)
            throw regime_error("max degree " + std::to_string(max_deg) +
                               " >= delta_c+1 = " + std::to_string(dc + 1.0) +
                               ": bounded mode unavailable");
        const Potential pot = make_phi1(params, std::max(2, max_deg), sys.max_lambda());
        return run_self_reduction(sys, request.epsilon, pot, "bounded", kDefaultSawBudget);
    }

    if (!params_universal)
        throw regime_error("universal mode requires beta <= 1 < gamma, got beta=" +
                           std::to_string(params.beta) + " gamma=" +
                           std::to_string(params.gamma));
    if (!fields_below_critical)
        throw regime_error("field " + std::to_string(sys.max_lambda()) + " >= lambda_c = " +
                           std::to_string(lc) + ": universal mode unavailable");
    const Potential pot = make_phi2(params, std::min(sys.max_lambda() * (1.0 + 1e-9), lc * 0.999999));
    return run_self_reduction(sys, request.epsilon, pot, "universal", kDefaultSawBudget);
}

ApproxResult approx_partition_with_potential(const SpinSystem& sys, double epsilon,
                                             const Potential& pot, const std::string& mode_name,
                                             std::size_t node_budget) {
    return run_self_reduction(sys, epsilon, pot, mode_name, node_budget);
}

}  // namespace twospin
