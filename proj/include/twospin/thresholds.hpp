#ifndef TWOSPIN_THRESHOLDS_HPP
#define TWOSPIN_THRESHOLDS_HPP

#include <optional>
#include <utility>
#include <vector>

#include "twospin/spin_system.hpp"

namespace twospin {

// (sqrt(beta gamma) + 1)/(sqrt(beta gamma) - 1): the critical (possibly
// fractional) degree of the symmetric tree recursion.
double delta_c(SpinParams params);

// (gamma/beta)^((delta_c + 1)/2), the critical field of the fractional
// uniqueness condition. Requires beta <= gamma.
double lambda_c(SpinParams params);

struct ThresholdReport {
    double delta_c = 0.0;
    double lambda_c = 0.0;
    double lambda_c_int = 0.0;        // (gamma/beta)^((ceil(delta_c)+1)/2)
    double lambda_c_int_prime = 0.0;  // (gamma/beta)^((floor(delta_c)+2)/2)
    bool delta_c_integral = false;    // the two integral thresholds differ iff set
};

ThresholdReport compute_thresholds(SpinParams params);

// Roots 0 < x0 <= x1 of (beta x + 1)(x + gamma) = d (beta gamma - 1) x, the
// points where f_d' crosses 1. Empty below delta_c; x0 = x1 = sqrt(gamma/beta)
// at d = delta_c; the product x0 x1 is gamma/beta (the coefficient ratio of
// the quadratic, verified by substitution in the tests).
std::optional<std::pair<double, double>> critical_x_pair(SpinParams params, double d);

// Inflection point x* = (d(beta gamma - 1) - (beta gamma + 1))/(2 beta) of f_d.
double inflection_x(SpinParams params, double d);

struct FixedPoint {
    double x = 0.0;
    double derivative = 0.0;  // f_d'(x)
    bool tangent = false;     // |f_d'(x) - 1| below the tangency threshold
};

struct FixedPointSet {
    std::vector<FixedPoint> points;  // ascending, 1 to 3 entries
    double inflection = 0.0;
};

// All fixed points of f_d(x) = x for real d > 0, by monotone bisection on the
// sign structure induced by the critical pair.
FixedPointSet fixed_points(SpinParams params, double lambda, double d);

// Fixed points of the two-layer map f_{d_outer}(f_{d_inner}(x)).
FixedPointSet fixed_points_composed(SpinParams params, double lambda, double d_outer,
                                    double d_inner);

enum class Uniqueness { unique, non_unique, boundary };

// Gibbs uniqueness on the infinite tree_degree-regular tree; the recursion
// degree is tree_degree - 1. Below delta_c the verdict is unique regardless
// of the field; otherwise unique iff lambda > g0(d) or lambda < g1(d).
Uniqueness uniqueness_at_degree(SpinParams params, double lambda, double tree_degree);

// g_i(d) = x_i ((x_i + gamma)/(beta x_i + 1))^d for branch i in {0, 1}: the
// fields at which x_i becomes a tangent fixed point of f_d. Defined for
// d >= delta_c; nondecreasing in d when beta <= 1.
double boundary_field(SpinParams params, double d, int branch);

const char* to_string(Uniqueness u);

}  // namespace twospin

#endif
