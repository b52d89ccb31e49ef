#ifndef TWOSPIN_FPTAS_HPP
#define TWOSPIN_FPTAS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "twospin/potentials.hpp"
#include "twospin/saw.hpp"
#include "twospin/spin_system.hpp"

namespace twospin {

enum class ApproxMode { bounded, universal, automatic };

ApproxMode parse_mode(const std::string& name);

struct ApproxRequest {
    SpinSystem system;
    double epsilon = 1e-3;  // relative error target in (0,1)
    ApproxMode mode = ApproxMode::automatic;
};

struct MarginalBounds {
    double p_lower = 0.0;  // bracket for Pr[spin 0]
    double p_upper = 1.0;
    int depth_used = 0;
    std::size_t nodes_expanded = 0;

    double midpoint() const { return 0.5 * (p_lower + p_upper); }
    double gap() const { return p_upper - p_lower; }
};

// Smallest truncation depth t with C_total * lambda * alpha^t <= eps_additive,
// where C_total assembles the boundary constant c2/c1, the degree-d0 root
// correction d0 lambda (bg-1)/gamma * max(1,beta)^{d0}, and the boundary
// field factor max(1,beta)^{d0}.
int select_depth(const Potential& pot, SpinParams params, double lambda, double eps_additive,
                 int degree_hint);

// Certified bracket of the spin-0 marginal of v: SAW tree to the potential's
// horizon (plain depth for good, M-based for universal), pins absorbed, then
// the interval recursion. The exact marginal always lies inside the bracket;
// in the potential's regime the gap is at most eps_additive.
MarginalBounds approx_marginal(const SpinSystem& sys, VertexId v, double eps_additive,
                               const Potential& pot,
                               std::size_t node_budget = kDefaultSawBudget);

struct ApproxResult {
    double log_z = 0.0;
    double epsilon = 0.0;
    std::string mode;
    std::vector<int> depths;
    std::size_t nodes_expanded = 0;
};

// Deterministic approximation of log Z within relative error epsilon by
// self-reducibility: vertices are pinned one at a time to a spin whose
// conditional probability is at least 1/4, each estimated to additive error
// epsilon/(3n).
ApproxResult approx_partition(const ApproxRequest& request);

// Same loop with a caller-supplied universal potential (the beyond-lambda_c
// certificate path).
ApproxResult approx_partition_with_potential(const SpinSystem& sys, double epsilon,
                                             const Potential& pot, const std::string& mode_name,
                                             std::size_t node_budget = kDefaultSawBudget);

}  // namespace twospin

#endif
