#include "twospin/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "twospin/errors.hpp"
#include "twospin/tree.hpp"

namespace twospin {

namespace {

void require_ordered(SpinParams params, const char* who) {
    if (!(params.beta <= params.gamma))
        throw regime_error(std::string(who) + " requires beta <= gamma (got beta=" +
                           std::to_string(params.beta) + " gamma=" +
                           std::to_string(params.gamma) + ")");
}

constexpr double kTangencyTol = 1e-8;

}  // namespace

double delta_c(SpinParams params) {
    const double s = std::sqrt(params.beta * params.gamma);
    return (s + 1.0) / (s - 1.0);
}

double lambda_c(SpinParams params) {
    require_ordered(params, "lambda_c");
    return std::exp((delta_c(params) + 1.0) / 2.0 * std::log(params.gamma / params.beta));
}

ThresholdReport compute_thresholds(SpinParams params) {
    require_ordered(params, "compute_thresholds");
    ThresholdReport rep;
    rep.delta_c = delta_c(params);
    const double log_ratio = std::log(params.gamma / params.beta);
    rep.lambda_c = std::exp((rep.delta_c + 1.0) / 2.0 * log_ratio);
    rep.lambda_c_int = std::exp((std::ceil(rep.delta_c) + 1.0) / 2.0 * log_ratio);
    rep.lambda_c_int_prime = std::exp((std::floor(rep.delta_c) + 2.0) / 2.0 * log_ratio);
    rep.delta_c_integral = std::floor(rep.delta_c) == rep.delta_c;
    return rep;
}

double inflection_x(SpinParams params, double d) {
    const double bg = params.beta * params.gamma;
    return (d * (bg - 1.0) - (bg + 1.0)) / (2.0 * params.beta);
}

std::optional<std::pair<double, double>> critical_x_pair(SpinParams params, double d) {
    const double bg = params.beta * params.gamma;
    const double c = (bg + 1.0) - d * (bg - 1.0);
    const double disc = c * c - 4.0 * bg;
    if (disc < 0.0 || c >= 0.0) return std::nullopt;  // c >= 0 iff d <= (bg+1)/(bg-1)
    const double root = std::sqrt(disc);
    return std::make_pair((-c - root) / (2.0 * params.beta),
                          (-c + root) / (2.0 * params.beta));
}

namespace {

// sign of f_d(x) - x, computed in logs to survive huge lambda
int sign_h(SpinParams params, double lambda, double d, double x) {
    const double lf = std::log(lambda) +
                      d * (std::log(params.beta * x + 1.0) - std::log(x + params.gamma));
    const double lx = std::log(x);
    if (lf > lx) return 1;
    if (lf < lx) return -1;
    return 0;
}

// bisection for a root of f_d(x) = x inside [lo, hi], where sign(h) at the
// endpoints differs; works on log(x)
double bisect_fixed_point(const std::function<int(double)>& sign_at, double lo, double hi) {
    double llo = std::log(lo), lhi = std::log(hi);
    int slo = sign_at(lo);
    for (int it = 0; it < 200 && lhi - llo > 1e-15; ++it) {
        const double mid = 0.5 * (llo + lhi);
        const int sm = sign_at(std::exp(mid));
        if (sm == 0) return std::exp(mid);
        if (sm == slo)
            llo = mid;
        else
            lhi = mid;
    }
    return std::exp(0.5 * (llo + lhi));
}

void push_unique(std::vector<FixedPoint>& pts, SpinParams params, double lambda, double d,
                 double x) {
    for (const FixedPoint& p : pts)
        if (std::abs(p.x - x) <= 1e-9 * std::max(1.0, std::abs(x))) return;
    FixedPoint fp;
    fp.x = x;
    fp.derivative = eval_f_prime(params, lambda, d, x);
    fp.tangent = std::abs(fp.derivative - 1.0) < kTangencyTol;
    pts.push_back(fp);
}

}  // namespace

FixedPointSet fixed_points(SpinParams params, double lambda, double d) {
    if (!(lambda > 0.0) || !(d > 0.0))
        throw regime_error("fixed_points requires lambda > 0 and d > 0");
    FixedPointSet out;
    out.inflection = inflection_x(params, d);
    const auto sgn = [&](double x) { return sign_h(params, lambda, d, x); };

    // h > 0 at lo and h < 0 at hi: both hold strictly since f is increasing
    // with range (lambda gamma^-d, lambda beta^d)
    const double lo = lambda * std::exp(-d * std::log(params.gamma));
    const double hi = lambda * std::exp(d * std::log(params.beta));

    const auto pair = critical_x_pair(params, d);
    std::vector<double> cuts;
    if (pair) {
        if (pair->first > lo && pair->first < hi) cuts.push_back(pair->first);
        if (pair->second > lo && pair->second < hi) cuts.push_back(pair->second);
    }
    // On each region between cuts, h is strictly monotone (f' - 1 has constant
    // sign there), so a sign change pins down exactly one root.
    std::vector<double> grid{lo};
    for (double c : cuts) grid.push_back(c);
    grid.push_back(hi);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const int sa = sgn(grid[i]);
        const int sb = sgn(grid[i + 1]);
        if (sa == 0) push_unique(out.points, params, lambda, d, grid[i]);
        if (sb == 0) push_unique(out.points, params, lambda, d, grid[i + 1]);
        if (sa != 0 && sb != 0 && sa != sb)
            push_unique(out.points, params, lambda, d,
                        bisect_fixed_point(sgn, grid[i], grid[i + 1]));
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const FixedPoint& a, const FixedPoint& b) { return a.x < b.x; });
    return out;
}

FixedPointSet fixed_points_composed(SpinParams params, double lambda, double d_outer,
                                    double d_inner) {
    FixedPointSet out;
    out.inflection = std::numeric_limits<double>::quiet_NaN();
    const auto h = [&](double x) { return eval_f(params, lambda, d_outer,
                                                 eval_f(params, lambda, d_inner, x)); };
    const auto hp = [&](double x) {
        const double y = eval_f(params, lambda, d_inner, x);
        return eval_f_prime(params, lambda, d_outer, y) * eval_f_prime(params, lambda, d_inner, x);
    };
    const double lo = h(1e-12) * 0.5;
    const double hi = lambda;
    // dense log-grid scan for sign changes of h(x) - x, then bisection
    const int cells = 200'000;
    const double llo = std::log(lo), lhi = std::log(hi);
    double prev_x = lo;
    int prev_s = h(lo) > lo ? 1 : -1;
    for (int i = 1; i <= cells; ++i) {
        const double x = std::exp(llo + (lhi - llo) * i / cells);
        const double hx = h(x);
        const int s = hx > x ? 1 : (hx < x ? -1 : 0);
        if (s == 0 || s != prev_s) {
            double a = prev_x, b = x;
            for (int it = 0; it < 200; ++it) {
                const double mid = std::sqrt(a * b);
                if ((h(mid) > mid ? 1 : -1) == prev_s)
                    a = mid;
                else
                    b = mid;
            }
            const double root = std::sqrt(a * b);
            bool dup = false;
            for (const FixedPoint& p : out.points)
                if (std::abs(p.x - root) <= 1e-9 * std::max(1.0, root)) dup = true;
            if (!dup) {
                FixedPoint fp;
                fp.x = root;
                fp.derivative = hp(root);
                fp.tangent = std::abs(fp.derivative - 1.0) < kTangencyTol;
                out.points.push_back(fp);
            }
        }
        prev_x = x;
        prev_s = s == 0 ? prev_s : s;
    }
    return out;
}

double boundary_field(SpinParams params, double d, int branch) {
    require_ordered(params, "boundary_field");
    if (branch != 0 && branch != 1) throw regime_error("boundary_field branch must be 0 or 1");
    const auto pair = critical_x_pair(params, d);
    if (!pair) {
        // allow d = delta_c itself despite rounding in the discriminant
        if (std::abs(d - delta_c(params)) < 1e-9) {
            const double x = std::sqrt(params.gamma / params.beta);
            return x * std::exp(d * (std::log(x + params.gamma) -
                                     std::log(params.beta * x + 1.0)));
        }
        throw regime_error("boundary_field requires d >= delta_c = " +
                           std::to_string(delta_c(params)));
    }
    const double x = branch == 0 ? pair->first : pair->second;
    return x * std::exp(d * (std::log(x + params.gamma) - std::log(params.beta * x + 1.0)));
}

Uniqueness uniqueness_at_degree(SpinParams params, double lambda, double tree_degree) {
    require_ordered(params, "uniqueness_at_degree");
    if (!(tree_degree >= 2.0)) throw regime_error("uniqueness needs tree degree >= 2");
    const double d = tree_degree - 1.0;
    if (d < delta_c(params)) return Uniqueness::unique;
    const double g0 = boundary_field(params, d, 0);
    const double g1 = boundary_field(params, d, 1);
    if (std::abs(lambda - g0) <= 1e-12 * g0 || std::abs(lambda - g1) <= 1e-12 * g1)
        return Uniqueness::boundary;
    if (lambda > g0 || lambda < g1) return Uniqueness::unique;
    return Uniqueness::non_unique;
}

const char* to_string(Uniqueness u) {
    switch (u) {
        case Uniqueness::unique: return "unique";
        case Uniqueness::non_unique: return "non-unique";
        case Uniqueness::boundary: return "boundary";
    }
    return "?";
}

}  // namespace twospin
