#ifndef TWOSPIN_EXPERIMENTS_HPP
#define TWOSPIN_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "twospin/potentials.hpp"
#include "twospin/spin_system.hpp"
#include "twospin/thresholds.hpp"

namespace twospin {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

struct MixingRun {
    double lambda = 0.0;
    int dmax = 0;
    int trials = 0;
    std::vector<int> ells;
    std::vector<double> max_discrepancy;  // max |p_v - p_v'| per ell
    LinearFit fit;          // on log(max_discrepancy) vs ell
    double alpha_lambda = 0.0;
    double slope_bound = 0.0;  // log(alpha_lambda)/ceil(log_M(dmax+1)) + 0.05
};

// Spatial-mixing experiment: pairs of random trees sharing their first ell
// levels, exact root marginals, max discrepancy per ell, log-linear fit.
// generator_spec currently supports "random:dmax=<D>".
MixingRun mixing_decay(SpinParams params, double lambda, const std::string& generator_spec,
                       int ell_lo, int ell_hi, int trials, std::uint64_t seed);

struct FiveSevenReport {
    double lambda = 0.0;
    double lambda_c = 0.0;
    bool lambda_in_quoted_interval = false;  // [10.9759, 10.9965]
    FixedPointSet fixed_points;              // of f_5 ∘ f_7
    std::vector<double> seq_truncated;       // root ratio of T at depth 2l, l = 1..
    std::vector<double> seq_appended;        // root ratio of T' (extra 50-ary layer)
    double limit_truncated = 0.0;
    double limit_appended = 0.0;
    int iterations_to_converge = 0;
};

// The alternating 5/7-tree example at beta=1, gamma=2: truncation converges
// to the largest fixed point, appending a 50-ary layer to the smallest one.
FiveSevenReport five_seven_demo(double lambda, int report_levels = 30);

struct BeyondLambdaCInstance {
    int n = 0;
    double log_z_approx = 0.0;
    double log_z_oracle = 0.0;
    double rel_error_bound = 0.0;  // requested epsilon
    bool within = false;
};

struct BeyondLambdaCReport {
    Phi3Certificate certificate;
    double lambda = 0.0;
    double lambda_c = 0.0;
    std::vector<BeyondLambdaCInstance> instances;
};

// Runs the beyond-lambda_c certificate (beta=0.6, gamma=2, lambda=1002762)
// and the chopped-phi_3 FPTAS against the oracle on small random graphs.
BeyondLambdaCReport beyond_lambda_c_demo(std::uint64_t seed, int instances, double epsilon,
                                         int max_n = 14);

struct LandscapeRow {
    double lambda = 0.0;
    int tree_degree = 0;
    Uniqueness verdict = Uniqueness::unique;
    int n_fixed_points = 0;
    double g0 = 0.0;  // NaN below delta_c
    double g1 = 0.0;
};

std::vector<LandscapeRow> threshold_landscape(SpinParams params,
                                              const std::vector<double>& lambdas,
                                              const std::vector<int>& tree_degrees);

}  // namespace twospin

#endif
