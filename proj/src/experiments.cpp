#include "twospin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "twospin/errors.hpp"
#include "twospin/fptas.hpp"
#include "twospin/generate.hpp"
#include "twospin/rng.hpp"
#include "twospin/tree.hpp"

namespace twospin {

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    LinearFit fit;
    const std::size_t n = xs.size();
    if (n < 2 || ys.size() != n) return fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
        syy += ys[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = fit.slope * xs[i] + fit.intercept;
        ss_res += (ys[i] - pred) * (ys[i] - pred);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

namespace {

int parse_dmax(const std::string& spec) {
    const std::string key = "dmax=";
    const auto pos = spec.find(key);
    if (spec.rfind("random:", 0) != 0 || pos == std::string::npos)
        throw parse_error("mixing generator spec must look like random:dmax=<D>, got " + spec);
    return std::stoi(spec.substr(pos + key.size()));
}

}  // namespace

MixingRun mixing_decay(SpinParams params, double lambda, const std::string& generator_spec,
                       int ell_lo, int ell_hi, int trials, std::uint64_t seed) {
    if (!(params.beta <= params.gamma))
        throw regime_error("mixing_decay requires beta <= gamma");
    const double lc = lambda_c(params);
    if (!(lambda < lc))
        throw regime_error("mixing_decay requires lambda < lambda_c = " + std::to_string(lc));

    MixingRun run;
    run.lambda = lambda;
    run.dmax = parse_dmax(generator_spec);
    run.trials = trials;
    run.alpha_lambda = compute_alpha_lambda(params, lambda);
    const BaseSelection base = select_base_m(params, lambda, run.alpha_lambda);
    run.slope_bound =
        std::log(run.alpha_lambda) / m_depth_step(run.dmax, base.M) + 0.05;

    constexpr int kSuffixDepth = 8;
    constexpr int kMaxNodes = 60'000;
    Rng rng(seed);
    for (int ell = ell_lo; ell <= ell_hi; ++ell) {
        double worst = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            // shared prefix: a guaranteed spine of depth ell plus random side
            // branching, truncated at depth ell
            RootedTree prefix;
            int spine = prefix.add_node(lambda);
            const auto side = [&](int node, int level, Rng& r) {
                const int extra = r.uniform() < 0.4 ? r.between(1, std::max(1, run.dmax / 2)) : 0;
                for (int i = 0; i < extra && prefix.size() < kMaxNodes; ++i) {
                    const int c = prefix.add_child(node, lambda);
                    if (level + 1 < ell) {
                        // shallow random side subtree inside the prefix
                        struct It {
                            int n, lvl;
                        };
                        std::vector<It> q{{c, level + 1}};
                        while (!q.empty() && prefix.size() < kMaxNodes) {
                            const It it = q.back();
                            q.pop_back();
                            if (it.lvl >= ell) continue;
                            const int k = r.uniform() < 0.35 ? r.between(1, 2) : 0;
                            for (int j = 0; j < k; ++j)
                                q.push_back({prefix.add_child(it.n, lambda), it.lvl + 1});
                        }
                    }
                }
            };
            for (int level = 0; level < ell; ++level) {
                side(spine, level, rng);
                spine = prefix.add_child(spine, lambda);
            }
            RootedTree t1 = prefix, t2 = prefix;
            Rng r1 = rng.fork(), r2 = rng.fork();
            grow_random_suffix(t1, ell, lambda, run.dmax, kSuffixDepth, kMaxNodes, r1);
            grow_random_suffix(t2, ell, lambda, run.dmax, kSuffixDepth, kMaxNodes, r2);
            const double p1 = exact_tree_marginal(t1, params).probability();
            const double p2 = exact_tree_marginal(t2, params).probability();
            worst = std::max(worst, std::abs(p1 - p2));
        }
        run.ells.push_back(ell);
        run.max_discrepancy.push_back(worst);
    }
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < run.ells.size(); ++i) {
        if (run.max_discrepancy[i] <= 1e-300) continue;
        xs.push_back(run.ells[i]);
        ys.push_back(std::log(run.max_discrepancy[i]));
    }
    run.fit = fit_line(xs, ys);
    return run;
}

FiveSevenReport five_seven_demo(double lambda, int report_levels) {
    const SpinParams params(1.0, 2.0);
    FiveSevenReport rep;
    rep.lambda = lambda;
    rep.lambda_c = lambda_c(params);
    rep.lambda_in_quoted_interval = lambda >= 10.9759 && lambda <= 10.9965;
    rep.fixed_points = fixed_points_composed(params, lambda, 5.0, 7.0);

    // two-layer composition: even layers have 5 children, odd layers 7, so a
    // depth-2l tree folds to h^l(boundary) with h = f_5 ∘ f_7
    const auto h = [&](double x) {
        return eval_f(params, lambda, 5.0, eval_f(params, lambda, 7.0, x));
    };
    // T: leaves at depth 2l are bare, boundary ratio lambda
    // T': one more layer in which every vertex has 50 children
    double a = lambda;
    double b = eval_f(params, lambda, 50.0, lambda);
    for (int l = 1; l <= report_levels; ++l) {
        a = h(a);
        b = h(b);
        rep.seq_truncated.push_back(a);
        rep.seq_appended.push_back(b);
    }
    // iterate to numerical convergence for the limits (the contraction at the
    // stable fixed points is close to 1, so reported levels alone are far off)
    int iters = report_levels;
    for (; iters < 2'000'000; ++iters) {
        const double na = h(a), nb = h(b);
        if (std::abs(na - a) < 1e-14 * std::max(1.0, a) &&
            std::abs(nb - b) < 1e-14 * std::max(1.0, b)) {
            a = na;
            b = nb;
            break;
        }
        a = na;
        b = nb;
    }
    rep.limit_truncated = a;
    rep.limit_appended = b;
    rep.iterations_to_converge = iters;
    return rep;
}

BeyondLambdaCReport beyond_lambda_c_demo(std::uint64_t seed, int instances, double epsilon,
                                         int max_n) {
    const SpinParams params(0.6, 2.0);
    const double lambda = 1002762.0;
    BeyondLambdaCReport rep;
    rep.lambda = lambda;
    rep.lambda_c = lambda_c(params);
    rep.certificate = make_phi3_certificate(params, lambda);
    const Potential pot = make_phi3_chopped(params, lambda, rep.certificate);

    Rng rng(seed);
    for (int i = 0; i < instances; ++i) {
        const int n = rng.between(4, max_n);
        const int m = rng.between(n - 1, n + 2);
        const SpinSystem sys = random_graph(params, n, m, lambda, lambda, rng);
        BeyondLambdaCInstance inst;
        inst.n = n;
        inst.rel_error_bound = epsilon;
        inst.log_z_oracle = exact_partition(sys);
        inst.log_z_approx =
            approx_partition_with_potential(sys, epsilon, pot, "phi3").log_z;
        inst.within = std::abs(inst.log_z_approx - inst.log_z_oracle) <=
                      std::log1p(epsilon) + 1e-12;
        rep.instances.push_back(inst);
    }
    return rep;
}

std::vector<LandscapeRow> threshold_landscape(SpinParams params,
                                              const std::vector<double>& lambdas,
                                              const std::vector<int>& tree_degrees) {
    std::vector<LandscapeRow> rows;
    const double dc = delta_c(params);
    for (const double lambda : lambdas)
        for (const int deg : tree_degrees) {
            LandscapeRow row;
            row.lambda = lambda;
            row.tree_degree = deg;
            row.verdict = uniqueness_at_degree(params, lambda, deg);
            row.n_fixed_points =
                static_cast<int>(fixed_points(params, lambda, deg - 1.0).points.size());
            if (deg - 1.0 >= dc) {
                row.g0 = boundary_field(params, deg - 1.0, 0);
                row.g1 = boundary_field(params, deg - 1.0, 1);
            } else {
                row.g0 = std::numeric_limits<double>::quiet_NaN();
                row.g1 = std::numeric_limits<double>::quiet_NaN();
            }
            rows.push_back(row);
        }
    return rows;
}

}  // namespace twospin
