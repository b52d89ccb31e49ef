#include "twospin/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "twospin/errors.hpp"
#include "twospin/logspace.hpp"
#include "twospin/thresholds.hpp"
#include "twospin/tree.hpp"

namespace twospin {

namespace {

constexpr double kGolden = 0.6180339887498949;

// maximize a unimodal-or-scanned function: log-grid seed, then golden section
template <typename F>
std::pair<double, double> maximize_log_grid(F&& fun, double lo, double hi, int grid_points,
                                            int golden_iters = 200) {
    const double llo = std::log(lo), lhi = std::log(hi);
    double best_x = lo, best_v = fun(lo);
    for (int i = 0; i <= grid_points; ++i) {
        const double x = std::exp(llo + (lhi - llo) * i / grid_points);
        const double v = fun(x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    const double step = (lhi - llo) / grid_points;
    double a = std::exp(std::max(llo, std::log(best_x) - step));
    double b = std::exp(std::min(lhi, std::log(best_x) + step));
    double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
    double fc = fun(c), fd = fun(d);
    for (int it = 0; it < golden_iters; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = fun(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = fun(d);
        }
    }
    const double xm = 0.5 * (a + b);
    const double vm = fun(xm);
    if (vm >= best_v) return {xm, vm};
    return {best_x, best_v};
}

void verify_phi_bounds(const Potential& pot) {
    const double lo = pot.domain_lo > 0.0 ? pot.domain_lo : pot.domain_hi * 1e-12;
    const double llo = std::log(lo), lhi = std::log(pot.domain_hi);
    for (int i = 0; i <= 10'000; ++i) {
        const double x = std::exp(llo + (lhi - llo) * i / 10'000);
        const double p = pot.phi(x);
        if (!(p >= pot.c1 * (1.0 - 1e-9)) || !(p <= pot.c2 * (1.0 + 1e-9)))
            throw regime_error("potential '" + pot.name + "' violates its phi bounds at x=" +
                               std::to_string(x));
    }
    if (!(pot.alpha < 1.0))
        throw regime_error("potential '" + pot.name + "' has contraction ratio >= 1");
}

double phi2_eval(double x, double t, double lambda,
                 const std::optional<std::pair<double, double>>& knots) {
    if (!knots) return 1.0 / t;
    if (x < knots->first || x >= knots->second) return 1.0 / t;
    return 1.0 / (x * std::log(lambda / x));
}

}  // namespace

double Potential::bound_for_degree(double d) const {
    if (kind == Kind::good) return alpha;
    const int k = m_depth_step(static_cast<int>(d), base_m);
    return std::pow(alpha, std::max(1, k));
}

bool Potential::in_domain(double x) const {
    if (!(x > 0.0)) return false;
    if (domain_lo > 0.0 && x < domain_lo * (1.0 - 1e-12)) return false;
    return x <= domain_hi * (1.0 + 1e-12);
}

double decay_rate(const Potential& pot, SpinParams params, double lambda_v,
                  std::span<const double> xs) {
    for (double x : xs)
        if (!pot.in_domain(x))
            throw regime_error("decay_rate: child value " + std::to_string(x) +
                               " outside the domain of potential '" + pot.name + "'");
    double F = lambda_v;
    for (double x : xs) F *= (params.beta * x + 1.0) / (x + params.gamma);
    const double bg1 = params.beta * params.gamma - 1.0;
    double sum = 0.0;
    for (double x : xs)
        sum += F * bg1 / ((params.beta * x + 1.0) * (x + params.gamma)) / pot.phi(x);
    return pot.phi(F) * sum;
}

Potential make_phi1(SpinParams params, int max_degree, double lambda) {
    const double dc = delta_c(params);
    if (!(lambda > 0.0)) throw regime_error("phi_1 needs a positive field bound");
    if (max_degree < 2) throw regime_error("phi_1 needs max degree >= 2");
    if (!(max_degree - 1 < dc))
        throw regime_error("phi_1 requires max degree - 1 < delta_c = " + std::to_string(dc) +
                           ", got " + std::to_string(max_degree - 1));
    Potential pot;
    pot.kind = Potential::Kind::good;
    pot.name = "phi1";
    pot.phi = [](double x) { return 1.0 / x; };
    const int d = max_degree - 1;
    pot.domain_lo = lambda * std::pow(params.gamma, -d);
    pot.domain_hi = lambda * std::pow(std::max(1.0, params.beta), d);
    pot.c1 = 1.0 / pot.domain_hi;
    pot.c2 = 1.0 / pot.domain_lo;
    pot.alpha = d / dc;
    verify_phi_bounds(pot);
    return pot;
}

namespace {

double g_lambda(SpinParams params, double lambda, double x) {
    const double bg1 = params.beta * params.gamma - 1.0;
    const double num = bg1 * x * std::log(lambda / x);
    const double den = (params.beta * x + 1.0) * (x + params.gamma) *
                       std::log((x + params.gamma) / (params.beta * x + 1.0));
    return num / den;
}

}  // namespace

double compute_alpha_lambda(SpinParams params, double lambda) {
    if (!(params.beta <= params.gamma))
        throw regime_error("alpha_lambda requires beta <= gamma");
    const double lc = lambda_c(params);
    if (!(lambda > 0.0) || !(lambda < lc))
        throw regime_error("alpha_lambda requires 0 < lambda < lambda_c = " +
                           std::to_string(lc) + ", got lambda = " + std::to_string(lambda));
    const auto [xm, sup] =
        maximize_log_grid([&](double x) { return g_lambda(params, lambda, x); },
                          lambda * 1e-18, lambda, 1000);
    (void)xm;
    const double alpha = sup * (1.0 + 1e-6);
    if (!(alpha < 1.0))
        throw regime_error("lambda = " + std::to_string(lambda) +
                           " is too close to lambda_c for a certified contraction");
    return alpha;
}

Phi2Config phi2_config(SpinParams params, double lambda) {
    Phi2Config cfg;
    cfg.alpha_lambda = compute_alpha_lambda(params, lambda);
    cfg.t = cfg.alpha_lambda * params.gamma / (params.beta * params.gamma - 1.0) *
            std::log((lambda + params.gamma) / (params.beta * lambda + 1.0));
    const double peak = lambda / std::exp(1.0);
    if (cfg.t < peak) {
        // x log(lambda/x) = t has one root on each side of lambda/e
        const auto value = [&](double x) { return x * std::log(lambda / x) - cfg.t; };
        const auto solve = [&](double a, double b, bool rising) {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (a + b);
                if ((value(mid) < 0.0) == rising)
                    a = mid;
                else
                    b = mid;
            }
            return 0.5 * (a + b);
        };
        double lo = peak * 0.5;
        while (value(lo) >= 0.0) lo *= 0.5;
        cfg.knots = std::make_pair(solve(lo, peak, true), solve(peak, lambda, false));
    }
    return cfg;
}

Potential make_phi2(SpinParams params, double lambda) {
    const Phi2Config cfg = phi2_config(params, lambda);
    const BaseSelection base = select_base_m(params, lambda, cfg.alpha_lambda);
    Potential pot;
    pot.kind = Potential::Kind::universal;
    pot.name = "phi2";
    pot.domain_lo = 0.0;
    pot.domain_hi = lambda;
    pot.phi = [t = cfg.t, lambda, knots = cfg.knots](double x) {
        return phi2_eval(x, t, lambda, knots);
    };
    pot.c1 = cfg.knots ? std::exp(1.0) / lambda : 1.0 / cfg.t;
    pot.c2 = 1.0 / cfg.t;
    pot.alpha = cfg.alpha_lambda;
    pot.base_m = base.M;
    pot.verified_degree_cap = base.verified_up_to;
    verify_phi_bounds(pot);
    return pot;
}

BaseSelection select_base_m(SpinParams params, double lambda, double alpha) {
    const double r = (params.beta * lambda + 1.0) / (lambda + params.gamma);
    if (!(r < 1.0))
        throw regime_error("select_base_m requires (beta lambda + 1)/(lambda + gamma) < 1");
    const double log_r = std::log(r);
    BaseSelection sel;
    sel.d0 = static_cast<int>(std::floor(1.0 / -log_r)) + 1;
    const double t = alpha * params.gamma / (params.beta * params.gamma - 1.0) *
                     std::log((lambda + params.gamma) / (params.beta * lambda + 1.0));
    const auto tail_bound = [&](double d) {
        return (alpha * lambda / t) * std::exp(d * log_r) * d * (-log_r);
    };
    for (int M = std::max(2, sel.d0); M < 10'000'000; ++M) {
        const int D = std::max(1000, M * M);
        bool ok = true;
        for (int d = M; d <= D && ok; ++d)
            ok = tail_bound(d) <= std::pow(alpha, m_depth_step(d, M));
        if (!ok) continue;
        // beyond D the gap keeps widening: log B falls linearly while the
        // schedule exponent grows only logarithmically
        const double u_at_d = std::log(tail_bound(D)) -
                              (1.0 + std::log(D + 1.0) / std::log(M)) * std::log(alpha);
        const double u_slope = log_r + 1.0 / D - std::log(alpha) / ((D + 1.0) * std::log(M));
        if (u_at_d < 0.0 && u_slope < 0.0) {
            sel.M = M;
            sel.verified_up_to = D;
            return sel;
        }
    }
    throw regime_error("select_base_m found no admissible base");
}

KeyInequalityReport key_inequality_check(SpinParams params, int samples) {
    if (!(params.beta <= params.gamma))
        throw regime_error("key inequality requires beta <= gamma");
    const double lc = lambda_c(params);
    KeyInequalityReport rep;
    rep.samples = samples;
    rep.edge_factor_below_one = true;
    rep.inequality_holds = true;
    const double bg1 = params.beta * params.gamma - 1.0;
    const double llo = std::log(lc) - 30.0, lhi = std::log(lc);
    for (int i = 1; i <= samples; ++i) {
        const double x = std::exp(llo + (lhi - llo) * i / samples);
        if ((params.beta * x + 1.0) / (x + params.gamma) > 1.0 + 1e-12)
            rep.edge_factor_below_one = false;
        const double lhs = bg1 * x * std::log(lc / x);
        const double rhs = (params.beta * x + 1.0) * (x + params.gamma) *
                           std::log((x + params.gamma) / (params.beta * x + 1.0));
        const double ratio = lhs / rhs;
        if (ratio > rep.max_ratio) {
            rep.max_ratio = ratio;
            rep.worst_x = x;
        }
        if (lhs > rhs * (1.0 + 1e-9)) rep.inequality_holds = false;
    }
    const double xhat = std::sqrt(params.gamma / params.beta);
    const double lhs = bg1 * xhat * std::log(lc / xhat);
    const double rhs = (params.beta * xhat + 1.0) * (xhat + params.gamma) *
                       std::log((xhat + params.gamma) / (params.beta * xhat + 1.0));
    rep.equality_residual = std::abs(lhs - rhs) / rhs;
    return rep;
}

double phi3_rho(SpinParams params, double t, double s) {
    const double b = params.beta, g = params.gamma;
    const double ex = std::exp(s);
    return (1.0 + b * g - b / ex - g * ex) * (std::log1p((b - ex) / (g * ex - 1.0)) + t);
}

double phi3_rho_second(SpinParams params, double t, double s) {
    const double b = params.beta, g = params.gamma;
    const double ex = std::exp(s), emx = std::exp(-s);
    const double A = 1.0 + b * g - b * emx - g * ex;
    const double Ap = b * emx - g * ex;
    const double App = -b * emx - g * ex;
    const double N = b - 1.0 + (g - 1.0) * ex;  // numerator of 1 + (b-e^s)/(g e^s - 1)
    const double D = g * ex - 1.0;
    const double B = std::log(N) - std::log(D) + t;
    const double qN = (g - 1.0) * ex / N;
    const double qD = g * ex / D;
    const double Bp = qN - qD;
    const double Bpp = qN - qN * qN - (qD - qD * qD);
    return App * B + 2.0 * Ap * Bp + A * Bpp;
}

double phi3_symmetric_rate(SpinParams params, double lambda, double t, double d, double x) {
    const double b = params.beta, g = params.gamma;
    const double log_fd = std::log(lambda) + d * (std::log(b * x + 1.0) - std::log(x + g));
    const double head = d * (b * g - 1.0) / (log1p_exp(-log_fd) + t);
    return head * x * (std::log1p(1.0 / x) + t) / ((b * x + 1.0) * (x + g));
}

Phi3Certificate make_phi3_certificate(SpinParams params, double lambda) {
    if (!(params.beta <= 1.0) || !(params.gamma > 1.0))
        throw regime_error("phi_3 certificate requires beta <= 1 < gamma");
    Phi3Certificate cert;
    const double b = params.beta, g = params.gamma;
    const double dc = delta_c(params);
    const double sq = std::sqrt(g / b);
    cert.t3 = dc * std::log(sq) / (sq + 1.0) - std::log1p(std::sqrt(b / g));

    // concavity of rho on (-log gamma, log beta)
    const double s_lo = -std::log(g), s_hi = std::log(b);
    if (!(s_lo < s_hi))
        throw regime_error("phi_3 concavity interval is empty (beta gamma <= 1?)");
    const double inset = (s_hi - s_lo) * 1e-9;
    double margin = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10'000; ++i) {
        const double s = s_lo + inset + (s_hi - s_lo - 2.0 * inset) * i / 10'000;
        margin = std::max(margin, phi3_rho_second(params, cert.t3, s));
    }
    cert.concavity_margin = margin;
    if (!(margin < 0.0))
        throw regime_error("phi_3 concavity check failed: max rho'' = " +
                           std::to_string(margin) + " >= 0 for beta=" + std::to_string(b) +
                           " gamma=" + std::to_string(g));

    // per-degree maxima of the symmetric rate
    std::vector<double> all_max(1001, 0.0);
    for (int d = 1; d <= 1000; ++d) {
        const auto [xm, vm] = maximize_log_grid(
            [&](double x) { return phi3_symmetric_rate(params, lambda, cert.t3, d, x); },
            1e-8, lambda, d <= 100 ? 2000 : 400);
        all_max[d] = vm;
        if (d <= 100) cert.per_degree_max.push_back({d, xm, vm});
        if (d <= 100 && vm > cert.alpha3) {
            cert.alpha3 = vm;
            cert.argmax_degree = d;
            cert.argmax_x = xm;
        }
    }

    cert.c0 = maximize_log_grid(
                  [&](double x) {
                      return x * (std::log1p(1.0 / x) + cert.t3) / ((b * x + 1.0) * (x + g));
                  },
                  1e-9, 1e9, 4000)
                  .second;
    for (int d = 101; d <= 20'000; ++d) {
        const double v = d * (b * g - 1.0) /
                         (log1p_exp(-std::log(lambda) - d * std::log(b)) + cert.t3);
        cert.c1_tail = std::max(cert.c1_tail, v);
    }
    cert.alpha3 = std::max(cert.alpha3, cert.c0 * cert.c1_tail);
    if (!(cert.alpha3 < 1.0))
        throw regime_error("phi_3 certificate failed: alpha3 = " + std::to_string(cert.alpha3));

    // schedule base: smallest M whose degree schedule dominates the verified
    // per-degree bounds plus the chop slop
    cert.chop = 1e-12;
    const double declared = cert.alpha3 * (1.0 + 1e-7);
    const double tail = std::max(cert.c0 * cert.c1_tail, all_max[1000]);
    for (int M = 2;; ++M) {
        bool ok = true;
        for (int d = 1; d <= 1000 && ok; ++d) {
            const double slop = (b * g - 1.0) * d * cert.chop / (g * cert.t3);
            ok = all_max[d] + slop <= std::pow(declared, m_depth_step(d, M));
        }
        // beyond d=1000 the rate bound is flat (tail) while the schedule only
        // decays log-slowly; verified_degree_cap limits the certified range
        const int cap = 1'000'000'000;
        const double slop_cap = (b * g - 1.0) * cap * cert.chop / (g * cert.t3);
        ok = ok && tail + slop_cap <= std::pow(declared, m_depth_step(cap, M));
        if (ok) {
            cert.base_m = M;
            break;
        }
        if (M > 4096)
            throw regime_error("phi_3 schedule base search failed");
    }
    return cert;
}

Potential make_phi3_chopped(SpinParams params, double lambda, const Phi3Certificate& cert) {
    (void)params;  // the certificate already fixes the parameter set
    Potential pot;
    pot.kind = Potential::Kind::universal;
    pot.name = "phi3-chopped";
    pot.domain_lo = 0.0;
    pot.domain_hi = lambda;
    const double t = cert.t3, tau = cert.chop;
    pot.phi = [t, tau](double x) {
        return 1.0 / std::max(tau, x * (std::log1p(1.0 / x) + t));
    };
    pot.c1 = 1.0 / (lambda * (std::log1p(1.0 / lambda) + t));
    pot.c2 = 1.0 / tau;
    pot.alpha = cert.alpha3 * (1.0 + 1e-7);
    pot.base_m = cert.base_m;
    pot.verified_degree_cap = 1e9;
    verify_phi_bounds(pot);
    return pot;
}

}  // namespace twospin
