#include "twospin/spin_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twospin/errors.hpp"
#include "twospin/generate.hpp"
#include "twospin/logspace.hpp"

namespace twospin {

SpinParams::SpinParams(double beta_, double gamma_) : beta(beta_), gamma(gamma_) {
    if (!(beta >= 0.0) || !(gamma >= 0.0))
        throw regime_error("edge weights must be nonnegative, got beta=" + std::to_string(beta) +
                           " gamma=" + std::to_string(gamma));
    if (!(beta * gamma > 1.0))
        throw regime_error("ferromagnetic regime requires beta*gamma > 1, got beta*gamma=" +
                           std::to_string(beta * gamma));
}

SpinSystem::SpinSystem(SpinParams params, std::vector<std::pair<VertexId, double>> vertices,
                       std::vector<std::pair<VertexId, VertexId>> edges,
                       std::vector<std::pair<VertexId, int>> pins, bool allow_self_loops)
    : params_(params) {
    lambda_.reserve(vertices.size());
    ids_.reserve(vertices.size());
    for (const auto& [id, lam] : vertices) {
        if (index_.count(id))
            throw parse_error("duplicate vertex id " + std::to_string(id));
        if (!(lam >= 0.0) || std::isnan(lam))
            throw parse_error("vertex " + std::to_string(id) + " has invalid field " +
                              std::to_string(lam));
        index_[id] = static_cast<int>(ids_.size());
        ids_.push_back(id);
        lambda_.push_back(lam);
    }
    pin_.assign(ids_.size(), std::nullopt);
    for (const auto& [id, spin] : pins) {
        if (!index_.count(id)) throw parse_error("pin references unknown vertex " + std::to_string(id));
        if (spin != 0 && spin != 1) throw parse_error("pin spin must be 0 or 1");
        pin_[index_.at(id)] = spin;
    }
    adj_.assign(ids_.size(), {});
    edges_.reserve(edges.size());
    for (const auto& [a, b] : edges) {
        if (!index_.count(a) || !index_.count(b))
            throw parse_error("edge (" + std::to_string(a) + "," + std::to_string(b) +
                              ") references unknown vertex");
        if (a == b && !allow_self_loops)
            throw parse_error("self-loop at vertex " + std::to_string(a));
        const int ia = index_.at(a), ib = index_.at(b);
        const int e = static_cast<int>(edges_.size());
        edges_.push_back({ia, ib});
        adj_[ia].emplace_back(ib, e);
        if (ia != ib) adj_[ib].emplace_back(ia, e);
    }
    for (int v = 0; v < size(); ++v) {
        std::sort(adj_[v].begin(), adj_[v].end(), [&](const auto& x, const auto& y) {
            if (ids_[x.first] != ids_[y.first]) return ids_[x.first] < ids_[y.first];
            return x.second < y.second;
        });
    }
}

int SpinSystem::index_of(VertexId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw parse_error("unknown vertex id " + std::to_string(id));
    return it->second;
}

double SpinSystem::max_lambda() const {
    double m = 0.0;
    for (int v = 0; v < size(); ++v)
        if (is_free(v)) m = std::max(m, lambda_[v]);
    return m;
}

int SpinSystem::free_count() const {
    int n = 0;
    for (const auto& p : pin_) n += !p.has_value();
    return n;
}

int SpinSystem::max_degree() const {
    int m = 0;
    for (const auto& a : adj_) m = std::max(m, static_cast<int>(a.size()));
    return m;
}

SpinSystem SpinSystem::with_pin(VertexId id, int spin) const {
    std::vector<std::pair<VertexId, double>> vs;
    std::vector<std::pair<VertexId, VertexId>> es;
    std::vector<std::pair<VertexId, int>> ps;
    for (int v = 0; v < size(); ++v) vs.emplace_back(ids_[v], lambda_[v]);
    for (const auto& e : edges_) es.emplace_back(ids_[e[0]], ids_[e[1]]);
    for (int v = 0; v < size(); ++v)
        if (pin_[v]) ps.emplace_back(ids_[v], *pin_[v]);
    ps.emplace_back(id, spin);
    return SpinSystem(params_, std::move(vs), std::move(es), std::move(ps), true);
}

double WeightAccumulator::value() const { return zero_flag ? 0.0 : std::exp(log_weight); }

WeightAccumulator weight(const SpinSystem& sys, const Configuration& sigma) {
    WeightAccumulator acc;
    const double beta = sys.params().beta, gamma = sys.params().gamma;
    int m0 = 0, m1 = 0;
    for (const auto& e : sys.edges()) {
        const int sa = sigma[e[0]], sb = sigma[e[1]];
        if (sa == 0 && sb == 0) ++m0;
        else if (sa == 1 && sb == 1) ++m1;
    }
    if (m0 > 0) acc.log_weight += m0 * std::log(beta);
    if (m1 > 0) acc.log_weight += m1 * std::log(gamma);
    for (int v = 0; v < sys.size(); ++v) {
        if (sigma[v] != 0) continue;
        const double lam = sys.lambda(v);
        if (lam == 0.0) {
            acc.zero_flag = true;
            acc.log_weight = neg_inf;
            return acc;
        }
        acc.log_weight += std::log(lam);
    }
    return acc;
}

namespace {

double enumerate_log_z(const SpinSystem& sys) {
    std::vector<int> free_vs;
    for (int v = 0; v < sys.size(); ++v)
        if (sys.is_free(v)) free_vs.push_back(v);
    const int k = static_cast<int>(free_vs.size());
    if (k > kOracleFreeLimit)
        throw budget_error("instance too large for the exact oracle: " + std::to_string(k) +
                           " free vertices (limit " + std::to_string(kOracleFreeLimit) + ")");

    Configuration sigma(sys.size(), 1);
    for (int v = 0; v < sys.size(); ++v)
        if (!sys.is_free(v)) sigma[v] = *sys.pin(v);

    double log_z = neg_inf;
    const std::uint64_t total = 1ULL << k;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (int i = 0; i < k; ++i) sigma[free_vs[i]] = (mask >> i) & 1ULL ? 1 : 0;
        const WeightAccumulator w = weight(sys, sigma);
        if (!w.zero_flag) log_z = log_add(log_z, w.log_weight);
    }
    return log_z;
}

}  // namespace

double exact_partition(const SpinSystem& sys) { return enumerate_log_z(sys); }

double exact_marginal(const SpinSystem& sys, VertexId v) {
    const int idx = sys.index_of(v);
    if (!sys.is_free(idx))
        throw regime_error("vertex " + std::to_string(v) + " is pinned; marginal undefined");
    const double log_z = enumerate_log_z(sys);
    const double log_z0 = enumerate_log_z(sys.with_pin(v, 0));
    if (log_z0 == neg_inf) return 0.0;
    return std::exp(log_z0 - log_z);
}

double exact_ratio(const SpinSystem& sys, VertexId v) {
    const int idx = sys.index_of(v);
    if (!sys.is_free(idx))
        throw regime_error("vertex " + std::to_string(v) + " is pinned; ratio undefined");
    const double log_z0 = enumerate_log_z(sys.with_pin(v, 0));
    const double log_z1 = enumerate_log_z(sys.with_pin(v, 1));
    if (log_z1 == neg_inf) return std::numeric_limits<double>::infinity();
    return std::exp(log_z0 - log_z1);
}

RandomClusterSplit random_cluster_split(const SpinSystem& sys, int edge_index) {
    if (sys.params().gamma == 1.0)
        throw regime_error("random-cluster split requires gamma != 1");
    if (sys.params().beta < 1.0)
        throw regime_error(
            "random-cluster split requires beta >= 1: the contracted field "
            "lambda_u lambda_v (beta-1)/(gamma-1) would be negative");
    if (edge_index < 0 || edge_index >= sys.edge_count())
        throw parse_error("edge index out of range");
    const auto [iu, iv] = sys.edge(edge_index);
    if (!sys.is_free(iu) || !sys.is_free(iv))
        throw regime_error("random-cluster split endpoints must be free");

    std::vector<std::pair<VertexId, double>> vs_minus, vs_plus;
    std::vector<std::pair<VertexId, VertexId>> es_minus, es_plus;
    std::vector<std::pair<VertexId, int>> ps;
    const VertexId keep = sys.id_of(iu);
    const double merged = sys.lambda(iu) * sys.lambda(iv) * (sys.params().beta - 1.0) /
                          (sys.params().gamma - 1.0);
    for (int v = 0; v < sys.size(); ++v) {
        vs_minus.emplace_back(sys.id_of(v), sys.lambda(v));
        if (v == iu)
            vs_plus.emplace_back(keep, merged);
        else if (v != iv)
            vs_plus.emplace_back(sys.id_of(v), sys.lambda(v));
        if (sys.pin(v)) ps.emplace_back(sys.id_of(v), *sys.pin(v));
    }
    for (int e = 0; e < sys.edge_count(); ++e) {
        if (e == edge_index) continue;
        const auto [a, b] = sys.edge(e);
        es_minus.emplace_back(sys.id_of(a), sys.id_of(b));
        const VertexId na = (a == iv || a == iu) ? keep : sys.id_of(a);
        const VertexId nb = (b == iv || b == iu) ? keep : sys.id_of(b);
        es_plus.emplace_back(na, nb);  // parallel copies of (u,v) become self-loops
    }
    return RandomClusterSplit{
        SpinSystem(sys.params(), vs_minus, std::move(es_minus), ps, true),
        SpinSystem(sys.params(), std::move(vs_plus), std::move(es_plus), ps, true), keep};
}

MarginalSweepReport marginal_bound_sweep(SpinParams params, double lambda, int trials,
                                         int size_bound, std::uint64_t seed) {
    if (!(params.beta >= 1.0) || !(params.beta <= params.gamma))
        throw regime_error("marginal bound sweep requires 1 <= beta <= gamma");
    if (params.beta > 1.0 && lambda > (params.gamma - 1.0) / (params.beta - 1.0))
        throw regime_error("marginal bound sweep requires lambda <= (gamma-1)/(beta-1)");
    if (size_bound > kOracleFreeLimit)
        throw budget_error("size bound exceeds the oracle guard");

    MarginalSweepReport rep;
    rep.bound = lambda / (lambda + 1.0);
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        const int n = rng.between(2, size_bound);
        const int m = rng.between(1, std::min(2 * n, n * (n - 1) / 2 + 1));
        // fields at most lambda, pins absent (the bound is about unpinned
        // instances); half the sweep runs the uniform field lambda itself,
        // where symmetric instances can saturate the bound exactly
        const double field_lo = t % 2 == 0 ? lambda : lambda * 0.05;
        const SpinSystem sys =
            random_graph(params, n, m, field_lo, lambda, rng, /*pin_fraction=*/0.0);
        ++rep.graphs;
        for (int v = 0; v < sys.size(); ++v) {
            const double p = exact_marginal(sys, sys.id_of(v));
            ++rep.vertices_checked;
            rep.max_marginal = std::max(rep.max_marginal, p);
            if (p > rep.bound + 1e-12) ++rep.violations;
        }
    }
    return rep;
}

}  // namespace twospin
