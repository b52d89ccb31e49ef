#include "twospin/saw.hpp"

#include <limits>
#include <string>
#include <vector>

#include "twospin/errors.hpp"

namespace twospin {

SawHorizon SawHorizon::full() { return SawHorizon{}; }

SawHorizon SawHorizon::plain(int t) {
    SawHorizon h;
    h.kind = Kind::plain_depth;
    h.t = t;
    return h;
}

SawHorizon SawHorizon::m_based(int ell, double M) {
    SawHorizon h;
    h.kind = Kind::m_based;
    h.ell = ell;
    h.M = M;
    return h;
}

namespace {

struct Walker {
    const SpinSystem& sys;
    const SawHorizon& horizon;
    std::size_t budget;
    RootedTree tree;
    // departure_edge[g]: edge through which the current walk left graph
    // vertex g; -1 when g is not on the path. This is what the cycle-closing
    // pin convention compares against.
    std::vector<int> departure_edge;

    Walker(const SpinSystem& s, const SawHorizon& h, std::size_t b)
        : sys(s), horizon(h), budget(b), departure_edge(s.size(), -1) {}

    int rank_at(int g, int edge) const {
        const auto& adj = sys.adjacency(g);
        for (std::size_t i = 0; i < adj.size(); ++i)
            if (adj[i].second == edge) return static_cast<int>(i);
        return -1;
    }

    int new_node(int g, std::optional<int> pin) {
        if (tree.nodes.size() >= budget)
            throw budget_error("SAW tree exceeds node budget of " + std::to_string(budget));
        const int v = tree.add_node(sys.lambda(g), pin);
        tree.nodes[v].graph_vertex = sys.id_of(g);
        return v;
    }

    bool expand_allowed(int depth, int m_depth, int parent_m_depth) const {
        switch (horizon.kind) {
            case SawHorizon::Kind::full: return true;
            case SawHorizon::Kind::plain_depth: return depth <= horizon.t;
            case SawHorizon::Kind::m_based:
                // one extra level past B(ell) before the cut
                return m_depth <= horizon.ell || parent_m_depth <= horizon.ell;
        }
        return true;
    }

    // node: tree node for graph vertex g, reached via in_edge (-1 at the root)
    void expand(int node, int g, int in_edge, int depth, int m_depth) {
        const auto& adj = sys.adjacency(g);
        const int child_count = static_cast<int>(adj.size()) - (in_edge >= 0 ? 1 : 0);
        if (child_count == 0) return;
        const int child_m = m_depth + m_depth_step(child_count, horizon.M);
        for (const auto& [w, e] : adj) {
            if (e == in_edge) continue;
            if (!sys.is_free(w)) {
                // new_node may reallocate the arena: take the index first
                const int leaf = new_node(w, *sys.pin(w));
                tree.nodes[node].children.push_back(leaf);
                continue;
            }
            if (departure_edge[w] >= 0) {
                const int pin = rank_at(w, e) > rank_at(w, departure_edge[w]) ? 0 : 1;
                const int leaf = new_node(w, pin);
                tree.nodes[node].children.push_back(leaf);
                continue;
            }
            const int child = new_node(w, std::nullopt);
            tree.nodes[node].children.push_back(child);
            if (expand_allowed(depth + 1, child_m, m_depth)) {
                departure_edge[g] = e;
                expand(child, w, e, depth + 1, child_m);
                departure_edge[g] = -1;
            } else if (sys.degree(w) > 1) {
                tree.nodes[child].truncated = true;
            }
        }
    }
};

}  // namespace

RootedTree build_saw(const SpinSystem& sys, VertexId root, const SawHorizon& horizon,
                     std::size_t node_budget) {
    const int r = sys.index_of(root);
    if (!sys.is_free(r))
        throw regime_error("SAW root " + std::to_string(root) + " is pinned");
    Walker walker(sys, horizon, node_budget);
    const int node = walker.new_node(r, std::nullopt);
    if (walker.expand_allowed(0, 0, std::numeric_limits<int>::max()) || sys.degree(r) == 0)
        walker.expand(node, r, -1, 0, 0);
    else
        walker.tree.nodes[node].truncated = true;
    return std::move(walker.tree);
}

Ratio saw_ratio_exact(const SpinSystem& sys, VertexId root, std::size_t node_budget) {
    const RootedTree tree = build_saw(sys, root, SawHorizon::full(), node_budget);
    return exact_tree_marginal(tree, sys.params());
}

}  // namespace twospin
