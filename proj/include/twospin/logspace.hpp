#ifndef TWOSPIN_LOGSPACE_HPP
#define TWOSPIN_LOGSPACE_HPP

#include <cmath>
#include <limits>
#include <span>

namespace twospin {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)), safe for -inf arguments.
inline double log_add(double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    const double hi = a > b ? a : b;
    const double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

// log(sum exp(v_i)) with a fixed left-to-right reduction order.
inline double log_sum_exp(std::span<const double> vals) {
    double hi = neg_inf;
    for (double v : vals) hi = v > hi ? v : hi;
    if (hi == neg_inf) return neg_inf;
    double sum = 0.0;
    for (double v : vals) sum += std::exp(v - hi);
    return hi + std::log(sum);
}

// log(1 + exp(u)) without overflow for large u.
inline double log1p_exp(double u) {
    if (u > 30.0) return u + std::log1p(std::exp(-u));
    return std::log1p(std::exp(u));
}

}  // namespace twospin

#endif
