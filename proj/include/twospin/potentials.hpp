#ifndef TWOSPIN_POTENTIALS_HPP
#define TWOSPIN_POTENTIALS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "twospin/spin_system.hpp"

namespace twospin {

// A certified potential function, carried around by its derivative phi.
// Good potentials bound the amortized decay rate by alpha for a bounded
// range of degrees; universal potentials bound it by alpha^ceil(log_M(d+1))
// for every degree up to verified_degree_cap. The declared constants are
// re-checked numerically at construction.
struct Potential {
    enum class Kind { good, universal };

    Kind kind = Kind::good;
    std::string name;
    std::function<double(double)> phi;
    double domain_lo = 0.0;  // exclusive when 0
    double domain_hi = 0.0;
    double c1 = 0.0;  // c1 <= phi <= c2 on the domain
    double c2 = 0.0;
    double alpha = 0.0;
    double base_m = 0.0;                 // universal only
    double verified_degree_cap = 1e9;    // universal only

    // alpha (good) or alpha^ceil(log_M(d+1)) (universal)
    double bound_for_degree(double d) const;
    bool in_domain(double x) const;
};

// Amortized one-step decay rate
//   C^phi_d(x) = phi(F_d(x)) * sum_i dF_d/dx_i * (1/phi(x_i)),
// with dF_d/dx_i = F_d (beta gamma - 1)/((beta x_i + 1)(x_i + gamma)).
// Throws regime_error when some x_i leaves the potential's domain.
double decay_rate(const Potential& pot, SpinParams params, double lambda_v,
                  std::span<const double> xs);

// Phi_1 = log x. Good for all degrees d <= max_degree - 1 with contraction
// ratio (max_degree - 1)/delta_c; requires max_degree - 1 < delta_c.
Potential make_phi1(SpinParams params, int max_degree, double lambda);

// Certified upper bound alpha_lambda < 1 on sup of
//   g_lambda(x) = (bg-1) x log(lambda/x) / ((bx+1)(x+gamma) log((x+gamma)/(bx+1)))
// over (0, lambda]; requires lambda < lambda_c.
double compute_alpha_lambda(SpinParams params, double lambda);

struct Phi2Config {
    double alpha_lambda = 0.0;
    double t = 0.0;  // alpha_lambda * gamma/(bg-1) * log((lambda+gamma)/(beta lambda+1))
    // the two roots of x log(lambda/x) = t when t < lambda/e
    std::optional<std::pair<double, double>> knots;
};

Phi2Config phi2_config(SpinParams params, double lambda);

// The universal potential with phi_2 = min(1/t, 1/(x log(lambda/x))),
// contraction alpha_lambda and base M from select_base_m.
Potential make_phi2(SpinParams params, double lambda);

struct BaseSelection {
    int M = 0;
    int d0 = 0;           // smallest d with ((beta lambda+1)/(lambda+gamma))^d < 1/e
    int verified_up_to = 0;
};

// Smallest integer base M >= max(2, d0) whose degree schedule dominates the
// tail bound B(d) = (alpha lambda / t) r^d d log(1/r) for every d >= M;
// checked directly up to max(1000, M^2) and by a decreasing-tail argument
// beyond.
BaseSelection select_base_m(SpinParams params, double lambda, double alpha);

struct KeyInequalityReport {
    int samples = 0;
    double max_ratio = 0.0;        // max over the grid of LHS/RHS
    double worst_x = 0.0;
    double equality_residual = 0.0;  // |LHS-RHS|/RHS at x = sqrt(gamma/beta)
    bool edge_factor_below_one = false;
    bool inequality_holds = false;
};

// Checks (beta x + 1)/(x + gamma) <= 1 and
// (bg-1) x log(lambda_c/x) <= (bx+1)(x+gamma) log((x+gamma)/(bx+1))
// on a log grid over (0, lambda_c], with equality at x = sqrt(gamma/beta).
KeyInequalityReport key_inequality_check(SpinParams params, int samples);

struct Phi3Certificate {
    double t3 = 0.0;
    double concavity_margin = 0.0;  // max of rho'' over the s-interval; < 0
    struct PerDegree {
        int d = 0;
        double argmax_x = 0.0;
        double value = 0.0;
    };
    std::vector<PerDegree> per_degree_max;  // d = 1..100
    double c0 = 0.0;       // max_x x(log(1+1/x)+t)/((bx+1)(x+gamma))
    double c1_tail = 0.0;  // max_{d>100} d(bg-1)/(log(1+1/(lambda beta^d))+t)
    double alpha3 = 0.0;   // max(per-degree maxima, c0*c1_tail) < 1
    int argmax_degree = 0;
    double argmax_x = 0.0;
    int base_m = 0;        // schedule base for the chopped potential
    double chop = 0.0;     // chop level tau of the emitted potential
};

// The beyond-lambda_c certificate around phi_3 = 1/(x(log(1+1/x)+t)).
// Refuses parameter sets whose concavity check fails (e.g. beta=1, gamma=2).
Phi3Certificate make_phi3_certificate(SpinParams params, double lambda);

// Bounded "chopped" variant 1/max(tau, x(log(1+1/x)+t)) as a universal
// potential with contraction alpha3 and the certificate's base.
Potential make_phi3_chopped(SpinParams params, double lambda, const Phi3Certificate& cert);

// rho(s) and its analytic second derivative, the concavity subject of the
// certificate; s ranges over (-log gamma, log beta).
double phi3_rho(SpinParams params, double t, double s);
double phi3_rho_second(SpinParams params, double t, double s);

// Symmetric decay rate of phi_3 at degree d and point x.
double phi3_symmetric_rate(SpinParams params, double lambda, double t, double d, double x);

}  // namespace twospin

#endif
