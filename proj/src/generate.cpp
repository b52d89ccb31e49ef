#include "twospin/generate.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace twospin {

namespace {

double log_uniform(Rng& rng, double lo, double hi) {
    if (lo <= 0.0 || lo == hi) return rng.uniform(lo, hi);
    return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

}  // namespace

SpinSystem random_graph(SpinParams params, int n, int m, double lambda_lo, double lambda_hi,
                        Rng& rng, double pin_fraction) {
    std::vector<std::pair<VertexId, double>> vs;
    for (int v = 0; v < n; ++v) vs.emplace_back(v, log_uniform(rng, lambda_lo, lambda_hi));
    std::vector<std::pair<VertexId, VertexId>> es;
    if (n < 2) m = 0;
    const int tree_span = std::min(n, m + 1);
    for (int v = 1; v < tree_span; ++v) es.emplace_back(rng.between(0, v - 1), v);
    while (static_cast<int>(es.size()) < m) {
        const int a = rng.between(0, n - 1);
        int b = rng.between(0, n - 1);
        if (a == b) b = (b + 1) % n;
        es.emplace_back(a, b);
    }
    std::vector<std::pair<VertexId, int>> pins;
    for (int v = 0; v < n; ++v)
        if (rng.uniform() < pin_fraction) pins.emplace_back(v, rng.between(0, 1));
    if (static_cast<int>(pins.size()) >= n && n > 0) pins.pop_back();  // keep one vertex free
    return SpinSystem(params, std::move(vs), std::move(es), std::move(pins));
}

SpinSystem random_graph_bounded_degree(SpinParams params, int n, int m, int max_degree,
                                       double lambda_lo, double lambda_hi, Rng& rng) {
    std::vector<std::pair<VertexId, double>> vs;
    for (int v = 0; v < n; ++v) vs.emplace_back(v, log_uniform(rng, lambda_lo, lambda_hi));
    std::vector<int> deg(n, 0);
    std::vector<std::pair<VertexId, VertexId>> es;
    for (int v = 1; v < n && static_cast<int>(es.size()) < m; ++v) {
        std::vector<int> candidates;
        for (int u = 0; u < v; ++u)
            if (deg[u] < max_degree) candidates.push_back(u);
        if (candidates.empty() || deg[v] >= max_degree) continue;
        const int u = candidates[rng.below(candidates.size())];
        es.emplace_back(u, v);
        ++deg[u];
        ++deg[v];
    }
    for (int attempt = 0; attempt < 20 * m && static_cast<int>(es.size()) < m; ++attempt) {
        const int a = rng.between(0, n - 1), b = rng.between(0, n - 1);
        if (a == b || deg[a] >= max_degree || deg[b] >= max_degree) continue;
        es.emplace_back(a, b);
        ++deg[a];
        ++deg[b];
    }
    return SpinSystem(params, std::move(vs), std::move(es));
}

}  // namespace twospin
