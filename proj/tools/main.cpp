// twospin: deterministic approximate counting for ferromagnetic 2-spin
// systems, with threshold analysis, contraction certificates, and the
// spatial-mixing experiments.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "twospin/errors.hpp"
#include "twospin/experiments.hpp"
#include "twospin/fptas.hpp"
#include "twospin/generate.hpp"
#include "twospin/json_io.hpp"
#include "twospin/potentials.hpp"
#include "twospin/saw.hpp"
#include "twospin/spin_system.hpp"
#include "twospin/thresholds.hpp"

namespace {

using nlohmann::json;
using namespace twospin;

struct GlobalOpts {
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 1;
    int jobs = 1;  // accepted for interface stability; execution is serial
};

std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void flatten_csv(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten_csv(v, prefix.empty() ? k : prefix + "." + k, os);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flatten_csv(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else if (j.is_number_float()) {
        os << prefix << "," << csv_number(j.get<double>()) << "\n";
    } else {
        os << prefix << "," << j.dump() << "\n";
    }
}

void emit(const GlobalOpts& opts, const json& report,
          const std::string& csv_table = std::string()) {
    std::ostringstream body;
    if (opts.format == "csv") {
        if (!csv_table.empty())
            body << csv_table;
        else
            flatten_csv(report, "", body);
    } else {
        body << report.dump(2) << "\n";
    }
    if (opts.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(opts.out);
        if (!f) throw parse_error("cannot write to " + opts.out);
        f << body.str();
    }
}

json threshold_json(const ThresholdReport& rep) {
    return json{{"delta_c", rep.delta_c},
                {"lambda_c", rep.lambda_c},
                {"lambda_c_int", rep.lambda_c_int},
                {"lambda_c_int_prime", rep.lambda_c_int_prime},
                {"delta_c_integral", rep.delta_c_integral}};
}

json fixed_point_json(const FixedPointSet& set) {
    json pts = json::array();
    for (const auto& p : set.points)
        pts.push_back({{"x", p.x}, {"derivative", p.derivative}, {"tangent", p.tangent}});
    json j{{"points", pts}, {"count", set.points.size()}};
    if (std::isfinite(set.inflection)) j["inflection"] = set.inflection;
    return j;
}

int dispatch(const GlobalOpts& opts, const std::function<json()>& work,
             const std::function<std::string(const json&)>& csv =
                 std::function<std::string(const json&)>()) {
    const json report = work();
    emit(opts, report, csv ? csv(report) : std::string());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ferromagnetic 2-spin systems: exact and approximate counting"};
    app.require_subcommand(1);
    GlobalOpts opts;
    app.add_option("--format", opts.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", opts.out, "write the report to a file");
    app.add_option("--seed", opts.seed, "seed for randomized commands");
    app.add_option("--jobs", opts.jobs, "worker cap")->check(CLI::PositiveNumber);

    double beta = 1.0, gamma = 2.0, lambda = 1.0, eps = 1e-3;
    std::string graph_path, mode = "auto", spec = "random:dmax=8";
    int degree = 3, vertex = 0, trials = 100, size_bound = 10;

    auto* cmd_thresholds = app.add_subcommand("thresholds", "critical degree and fields");
    cmd_thresholds->add_option("--beta", beta)->required();
    cmd_thresholds->add_option("--gamma", gamma)->required();

    auto* cmd_unique = app.add_subcommand("uniqueness", "Gibbs uniqueness per tree degree");
    cmd_unique->add_option("--beta", beta)->required();
    cmd_unique->add_option("--gamma", gamma)->required();
    cmd_unique->add_option("--lambda", lambda)->required();
    int degree_max = 0;
    cmd_unique->add_option("--degree", degree, "tree degree (>= 2)");
    cmd_unique->add_option("--degree-max", degree_max, "scan all tree degrees 2..D");

    auto* cmd_fp = app.add_subcommand("fixed-points", "fixed points of the tree recursion");
    cmd_fp->add_option("--beta", beta)->required();
    cmd_fp->add_option("--gamma", gamma)->required();
    cmd_fp->add_option("--lambda", lambda)->required();
    double fp_d = 2.0, fp_compose = 0.0;
    cmd_fp->add_option("--degree", fp_d, "recursion degree d (real valued)")->required();
    cmd_fp->add_option("--compose", fp_compose,
                       "treat --degree as outer layer and compose with this inner degree");

    auto* cmd_z = app.add_subcommand("z", "partition function");
    cmd_z->require_subcommand(1);
    auto* cmd_z_exact = cmd_z->add_subcommand("exact", "brute-force oracle (<= 25 free vertices)");
    cmd_z_exact->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
    auto* cmd_z_approx = cmd_z->add_subcommand("approx", "deterministic FPTAS");
    cmd_z_approx->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
    cmd_z_approx->add_option("--eps", eps, "relative error target");
    cmd_z_approx->add_option("--mode", mode)->check(CLI::IsMember({"auto", "bounded", "universal"}));

    auto* cmd_marginal = app.add_subcommand("marginal", "spin-0 marginal of a vertex");
    cmd_marginal->add_option("--graph", graph_path)->required()->check(CLI::ExistingFile);
    cmd_marginal->add_option("--vertex", vertex)->required();
    bool approx_flag = false;
    cmd_marginal->add_flag("--approx", approx_flag, "use the truncated-SAW bracket");
    cmd_marginal->add_option("--eps", eps, "additive error target (approx)");
    cmd_marginal->add_option("--mode", mode)->check(CLI::IsMember({"auto", "bounded", "universal"}));

    auto* cmd_exp = app.add_subcommand("experiment", "spatial-mixing and threshold studies");
    cmd_exp->require_subcommand(1);
    auto* exp_mixing = cmd_exp->add_subcommand("mixing", "spatial mixing decay on tree pairs");
    exp_mixing->add_option("--beta", beta)->required();
    exp_mixing->add_option("--gamma", gamma)->required();
    exp_mixing->add_option("--lambda", lambda)->required();
    int ell_min = 1, ell_max = 12;
    int mixing_trials = 32;
    exp_mixing->add_option("--spec", spec, "tree generator spec");
    exp_mixing->add_option("--ell-min", ell_min);
    exp_mixing->add_option("--ell-max", ell_max);
    exp_mixing->add_option("--trials", mixing_trials, "tree pairs per level");

    auto* exp_57 = cmd_exp->add_subcommand("five-seven", "alternating 5/7 tree, beta=1 gamma=2");
    exp_57->add_option("--lambda", lambda)->default_val(10.98);
    int levels = 30;
    exp_57->add_option("--levels", levels, "reported truncation levels");

    auto* exp_beyond = cmd_exp->add_subcommand("beyond-lambda-c",
                                               "phi_3 certificate at beta=0.6 gamma=2");
    int instances = 5;
    exp_beyond->add_option("--instances", instances);
    exp_beyond->add_option("--eps", eps)->default_val(0.1);
    int beyond_max_n = 12;
    exp_beyond->add_option("--max-n", beyond_max_n);

    auto* exp_land = cmd_exp->add_subcommand("landscape", "uniqueness verdicts over a grid");
    exp_land->add_option("--beta", beta)->required();
    exp_land->add_option("--gamma", gamma)->required();
    double lambda_min = 9.0, lambda_max = 13.0;
    int lambda_steps = 17, land_degree_max = 12;
    exp_land->add_option("--lambda-min", lambda_min);
    exp_land->add_option("--lambda-max", lambda_max);
    exp_land->add_option("--lambda-steps", lambda_steps);
    exp_land->add_option("--degree-max", land_degree_max);

    auto* exp_sweep = cmd_exp->add_subcommand("marginal-bound-sweep",
                                              "p_v <= lambda/(lambda+1) on random instances");
    exp_sweep->add_option("--beta", beta)->required();
    exp_sweep->add_option("--gamma", gamma)->required();
    exp_sweep->add_option("--lambda", lambda)->required();
    exp_sweep->add_option("--trials", trials);
    exp_sweep->add_option("--size-bound", size_bound);

    auto* exp_rc = cmd_exp->add_subcommand("random-cluster-check",
                                           "Z(G) = Z(G-) + (gamma-1) Z(G+) on random graphs");
    exp_rc->add_option("--beta", beta)->required();
    exp_rc->add_option("--gamma", gamma)->required();
    exp_rc->add_option("--trials", trials);
    exp_rc->add_option("--size-bound", size_bound);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (*cmd_thresholds)
            return dispatch(opts, [&] {
                return threshold_json(compute_thresholds(SpinParams(beta, gamma)));
            });

        if (*cmd_unique)
            return dispatch(
                opts,
                [&]() -> json {
                    const SpinParams params(beta, gamma);
                    json rows = json::array();
                    const int lo = degree_max > 0 ? 2 : degree;
                    const int hi = degree_max > 0 ? degree_max : degree;
                    for (int d = lo; d <= hi; ++d) {
                        const auto verdict = uniqueness_at_degree(params, lambda, d);
                        rows.push_back({{"tree_degree", d}, {"verdict", to_string(verdict)}});
                    }
                    return json{{"beta", beta}, {"gamma", gamma}, {"lambda", lambda},
                                {"verdicts", rows}};
                },
                [](const json& j) {
                    std::ostringstream os;
                    os << "tree_degree,verdict\n";
                    for (const auto& r : j.at("verdicts"))
                        os << r.at("tree_degree").get<int>() << ","
                           << r.at("verdict").get<std::string>() << "\n";
                    return os.str();
                });

        if (*cmd_fp)
            return dispatch(opts, [&]() -> json {
                const SpinParams params(beta, gamma);
                const FixedPointSet set =
                    fp_compose > 0.0
                        ? fixed_points_composed(params, lambda, fp_d, fp_compose)
                        : fixed_points(params, lambda, fp_d);
                json j = fixed_point_json(set);
                j["beta"] = beta;
                j["gamma"] = gamma;
                j["lambda"] = lambda;
                j["degree"] = fp_d;
                if (fp_compose > 0.0) j["composed_with"] = fp_compose;
                return j;
            });

        if (*cmd_z_exact)
            return dispatch(opts, [&]() -> json {
                const SpinSystem sys = system_from_json_file(graph_path);
                return json{{"logZ", exact_partition(sys)}, {"n", sys.size()},
                            {"free", sys.free_count()}};
            });

        if (*cmd_z_approx)
            return dispatch(opts, [&]() -> json {
                ApproxRequest req{system_from_json_file(graph_path), eps, parse_mode(mode)};
                const ApproxResult res = approx_partition(req);
                return json{{"logZ", res.log_z},
                            {"eps", res.epsilon},
                            {"mode", res.mode},
                            {"depths", res.depths},
                            {"nodes_expanded", res.nodes_expanded}};
            });

        if (*cmd_marginal)
            return dispatch(opts, [&]() -> json {
                const SpinSystem sys = system_from_json_file(graph_path);
                if (!approx_flag)
                    return json{{"vertex", vertex}, {"p", exact_marginal(sys, vertex)},
                                {"method", "oracle"}};
                ApproxRequest req{sys, 1e-3, parse_mode(mode)};
                const ApproxMode m = req.mode == ApproxMode::automatic
                                         ? (sys.max_degree() - 1 < delta_c(sys.params())
                                                ? ApproxMode::bounded
                                                : ApproxMode::universal)
                                         : req.mode;
                const Potential pot =
                    m == ApproxMode::bounded
                        ? make_phi1(sys.params(), std::max(2, sys.max_degree()),
                                    sys.max_lambda())
                        : make_phi2(sys.params(), sys.max_lambda() * (1 + 1e-9));
                const MarginalBounds mb = approx_marginal(sys, vertex, eps, pot);
                return json{{"vertex", vertex},
                            {"p_lower", mb.p_lower},
                            {"p_upper", mb.p_upper},
                            {"depth", mb.depth_used},
                            {"nodes_expanded", mb.nodes_expanded},
                            {"method", "saw-bracket"}};
            });

        if (*exp_mixing)
            return dispatch(
                opts,
                [&]() -> json {
                    const MixingRun run = mixing_decay(SpinParams(beta, gamma), lambda, spec,
                                                       ell_min, ell_max, mixing_trials,
                                                       opts.seed);
                    return json{{"lambda", run.lambda},
                                {"dmax", run.dmax},
                                {"trials", run.trials},
                                {"ells", run.ells},
                                {"max_discrepancy", run.max_discrepancy},
                                {"slope", run.fit.slope},
                                {"r_squared", run.fit.r_squared},
                                {"alpha_lambda", run.alpha_lambda},
                                {"slope_bound", run.slope_bound}};
                },
                [](const json& j) {
                    std::ostringstream os;
                    os << "ell,max_discrepancy\n";
                    const auto& ells = j.at("ells");
                    const auto& ds = j.at("max_discrepancy");
                    for (std::size_t i = 0; i < ells.size(); ++i)
                        os << ells[i].get<int>() << "," << csv_number(ds[i].get<double>())
                           << "\n";
                    return os.str();
                });

        if (*exp_57)
            return dispatch(opts, [&]() -> json {
                const FiveSevenReport rep = five_seven_demo(lambda, levels);
                return json{{"lambda", rep.lambda},
                            {"lambda_c", rep.lambda_c},
                            {"lambda_in_quoted_interval", rep.lambda_in_quoted_interval},
                            {"fixed_points", fixed_point_json(rep.fixed_points)},
                            {"seq_truncated", rep.seq_truncated},
                            {"seq_appended", rep.seq_appended},
                            {"limit_truncated", rep.limit_truncated},
                            {"limit_appended", rep.limit_appended},
                            {"iterations_to_converge", rep.iterations_to_converge}};
            });

        if (*exp_beyond)
            return dispatch(opts, [&]() -> json {
                const BeyondLambdaCReport rep =
                    beyond_lambda_c_demo(opts.seed, instances, eps, beyond_max_n);
                json pd = json::array();
                for (const auto& p : rep.certificate.per_degree_max)
                    pd.push_back({{"d", p.d}, {"x", p.argmax_x}, {"value", p.value}});
                json insts = json::array();
                for (const auto& inst : rep.instances)
                    insts.push_back({{"n", inst.n},
                                     {"logZ_approx", inst.log_z_approx},
                                     {"logZ_oracle", inst.log_z_oracle},
                                     {"within", inst.within}});
                return json{{"lambda", rep.lambda},
                            {"lambda_c", rep.lambda_c},
                            {"t3", rep.certificate.t3},
                            {"concavity_margin", rep.certificate.concavity_margin},
                            {"alpha3", rep.certificate.alpha3},
                            {"argmax_degree", rep.certificate.argmax_degree},
                            {"argmax_x", rep.certificate.argmax_x},
                            {"C0", rep.certificate.c0},
                            {"C1", rep.certificate.c1_tail},
                            {"base_m", rep.certificate.base_m},
                            {"per_degree_max", pd},
                            {"instances", insts}};
            });

        if (*exp_land)
            return dispatch(
                opts,
                [&]() -> json {
                    std::vector<double> lambdas;
                    for (int i = 0; i < lambda_steps; ++i)
                        lambdas.push_back(lambda_min + (lambda_max - lambda_min) * i /
                                                           std::max(1, lambda_steps - 1));
                    std::vector<int> degrees;
                    for (int d = 2; d <= land_degree_max; ++d) degrees.push_back(d);
                    const auto rows =
                        threshold_landscape(SpinParams(beta, gamma), lambdas, degrees);
                    json out = json::array();
                    for (const auto& r : rows) {
                        json row{{"lambda", r.lambda},
                                 {"tree_degree", r.tree_degree},
                                 {"verdict", to_string(r.verdict)},
                                 {"fixed_points", r.n_fixed_points}};
                        if (std::isfinite(r.g0)) row["g0"] = r.g0;
                        if (std::isfinite(r.g1)) row["g1"] = r.g1;
                        out.push_back(row);
                    }
                    return json{{"rows", out}};
                },
                [](const json& j) {
                    std::ostringstream os;
                    os << "lambda,tree_degree,verdict,fixed_points,g0,g1\n";
                    for (const auto& r : j.at("rows")) {
                        os << csv_number(r.at("lambda").get<double>()) << ","
                           << r.at("tree_degree").get<int>() << ","
                           << r.at("verdict").get<std::string>() << ","
                           << r.at("fixed_points").get<int>() << ","
                           << (r.contains("g0") ? csv_number(r.at("g0").get<double>()) : "")
                           << ","
                           << (r.contains("g1") ? csv_number(r.at("g1").get<double>()) : "")
                           << "\n";
                    }
                    return os.str();
                });

        if (*exp_sweep)
            return dispatch(opts, [&]() -> json {
                const MarginalSweepReport rep = marginal_bound_sweep(
                    SpinParams(beta, gamma), lambda, trials, size_bound, opts.seed);
                return json{{"graphs", rep.graphs},
                            {"vertices_checked", rep.vertices_checked},
                            {"max_marginal", rep.max_marginal},
                            {"bound", rep.bound},
                            {"violations", rep.violations}};
            });

        if (*exp_rc)
            return dispatch(opts, [&]() -> json {
                const SpinParams params(beta, gamma);
                if (params.gamma == 1.0)
                    throw regime_error("random-cluster identity needs gamma != 1");
                Rng rng(opts.seed);
                double worst = 0.0;
                int checked = 0;
                for (int i = 0; i < trials; ++i) {
                    const int n = rng.between(2, size_bound);
                    const int m = rng.between(1, 2 * n);
                    const SpinSystem sys = random_graph(params, n, m, 0.2, 5.0, rng);
                    if (sys.edge_count() == 0) continue;
                    const int e = static_cast<int>(rng.below(sys.edge_count()));
                    const auto split = random_cluster_split(sys, e);
                    const double lhs = std::exp(exact_partition(sys));
                    const double rhs = std::exp(exact_partition(split.minus)) +
                                       (params.gamma - 1.0) *
                                           std::exp(exact_partition(split.plus));
                    worst = std::max(worst, std::abs(lhs - rhs) / lhs);
                    ++checked;
                }
                return json{{"trials", checked}, {"max_rel_error", worst}};
            });

        std::cerr << "no subcommand selected\n";
        return 1;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const regime_error& e) {
        std::cerr << "regime violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
