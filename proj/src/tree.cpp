#include "twospin/tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>

#include "twospin/errors.hpp"

namespace twospin {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

Ratio Ratio::infinite() { return Ratio{inf}; }

bool Ratio::is_infinite() const { return std::isinf(value); }

double Ratio::probability() const {
    if (is_infinite()) return 1.0;
    if (value >= 1.0) return 1.0 / (1.0 + 1.0 / value);
    return value / (1.0 + value);
}

int RootedTree::add_node(double lambda, std::optional<int> pin) {
    nodes.push_back(TreeNode{lambda, pin, {}, false, -1});
    return static_cast<int>(nodes.size()) - 1;
}

int RootedTree::add_child(int parent, double lambda, std::optional<int> pin) {
    const int idx = add_node(lambda, pin);
    nodes[parent].children.push_back(idx);
    return idx;
}

int RootedTree::depth() const {
    const auto d = plain_depths(*this);
    return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

double edge_factor(SpinParams params, Ratio x) {
    if (x.is_infinite()) return params.beta;
    if (x.value > 1e100)  // avoid overflow in beta*x for near-inf finite values
        return (params.beta + 1.0 / x.value) / (1.0 + params.gamma / x.value);
    return (params.beta * x.value + 1.0) / (x.value + params.gamma);
}

Ratio eval_F(SpinParams params, double lambda_v, std::span<const Ratio> children) {
    double r = lambda_v;
    for (const Ratio& x : children) r *= edge_factor(params, x);
    return Ratio{r};
}

double eval_f(SpinParams params, double lambda, double d, double x) {
    return lambda * std::exp(d * (std::log(params.beta * x + 1.0) - std::log(x + params.gamma)));
}

double eval_f_prime(SpinParams params, double lambda, double d, double x) {
    return d * (params.beta * params.gamma - 1.0) * eval_f(params, lambda, d, x) /
           ((params.beta * x + 1.0) * (x + params.gamma));
}

double eval_f_second(SpinParams params, double lambda, double d, double x) {
    const double bg = params.beta * params.gamma;
    return eval_f_prime(params, lambda, d, x) *
           (d * (bg - 1.0) - (bg + 1.0) - 2.0 * params.beta * x) /
           ((params.beta * x + 1.0) * (x + params.gamma));
}

namespace {

// post-order traversal without recursion; `leaf_value` and `combine` define
// the semantics at leaves/pins and internal nodes.
template <typename T, typename PinFn, typename LeafFn, typename CombineFn>
T fold_tree(const RootedTree& tree, PinFn&& pin_value, LeafFn&& leaf_value,
            CombineFn&& combine) {
    std::vector<T> out(tree.nodes.size());
    std::vector<std::pair<int, bool>> stack{{tree.root(), false}};
    while (!stack.empty()) {
        auto [v, expanded] = stack.back();
        stack.pop_back();
        const TreeNode& node = tree.nodes[v];
        if (node.pin) {
            out[v] = pin_value(v, *node.pin);
            continue;
        }
        if (node.children.empty()) {
            out[v] = leaf_value(v);
            continue;
        }
        if (!expanded) {
            stack.emplace_back(v, true);
            for (auto it = node.children.rbegin(); it != node.children.rend(); ++it)
                stack.emplace_back(*it, false);
        } else {
            out[v] = combine(v, out);
        }
    }
    return out[tree.root()];
}

}  // namespace

Ratio exact_tree_marginal(const RootedTree& tree, SpinParams params) {
    for (const TreeNode& n : tree.nodes)
        if (n.truncated)
            throw regime_error("exact tree recursion on a truncated tree; use bounds_recursion");
    return fold_tree<Ratio>(
        tree, [](int, int pin) { return pin == 0 ? Ratio::infinite() : Ratio{0.0}; },
        [&](int v) { return Ratio{tree.nodes[v].lambda}; },
        [&](int v, const std::vector<Ratio>& vals) {
            double r = tree.nodes[v].lambda;
            for (int c : tree.nodes[v].children) r *= edge_factor(params, vals[c]);
            return Ratio{r};
        });
}

RootedTree absorb_pins(const RootedTree& tree, SpinParams params) {
    RootedTree out;
    if (tree.nodes[tree.root()].pin) return tree;

    struct Frame {
        int src;
        int dst;
        std::size_t next_child = 0;
    };
    out.add_node(tree.nodes[tree.root()].lambda);
    out.nodes[0].truncated = tree.nodes[tree.root()].truncated;
    out.nodes[0].graph_vertex = tree.nodes[tree.root()].graph_vertex;
    std::vector<Frame> stack{{tree.root(), 0}};
    while (!stack.empty()) {
        Frame& f = stack.back();
        const TreeNode& src = tree.nodes[f.src];
        if (f.next_child == src.children.size()) {
            stack.pop_back();
            continue;
        }
        const int c = src.children[f.next_child++];
        const TreeNode& child = tree.nodes[c];
        if (child.pin) {
            out.nodes[f.dst].lambda *=
                (*child.pin == 0) ? params.beta : 1.0 / params.gamma;
            continue;
        }
        const int nc = out.add_child(f.dst, child.lambda);
        out.nodes[nc].truncated = child.truncated;
        out.nodes[nc].graph_vertex = child.graph_vertex;
        stack.push_back({c, nc});
    }
    return out;
}

double BoundsPair::gap() const {
    if (upper.is_infinite()) return lower.is_infinite() ? 0.0 : inf;
    return upper.value - lower.value;
}

double BoundsPair::probability_gap() const {
    return upper.probability() - lower.probability();
}

BoundsPair bounds_recursion(const RootedTree& tree, SpinParams params,
                            const HorizonPredicate& expand) {
    return fold_tree<BoundsPair>(
        tree,
        [](int, int pin) {
            const Ratio r = pin == 0 ? Ratio::infinite() : Ratio{0.0};
            return BoundsPair{r, r};
        },
        [&](int v) -> BoundsPair {
            const TreeNode& node = tree.nodes[v];
            if (node.truncated || !expand(tree, v))
                return BoundsPair{Ratio{0.0}, Ratio::infinite()};
            return BoundsPair{Ratio{node.lambda}, Ratio{node.lambda}};
        },
        [&](int v, const std::vector<BoundsPair>& vals) -> BoundsPair {
            const TreeNode& node = tree.nodes[v];
            if (node.truncated || !expand(tree, v))
                return BoundsPair{Ratio{0.0}, Ratio::infinite()};
            double lo = node.lambda, hi = node.lambda;
            for (int c : node.children) {
                lo *= edge_factor(params, vals[c].lower);
                hi *= edge_factor(params, vals[c].upper);
            }
            return BoundsPair{Ratio{lo}, Ratio{hi}};
        });
}

BoundsPair bounds_recursion(const RootedTree& tree, SpinParams params) {
    return bounds_recursion(tree, params, [](const RootedTree&, int) { return true; });
}

std::vector<int> plain_depths(const RootedTree& tree) {
    std::vector<int> depth(tree.nodes.size(), 0);
    std::deque<int> queue{tree.root()};
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int c : tree.nodes[v].children) {
            depth[c] = depth[v] + 1;
            queue.push_back(c);
        }
    }
    return depth;
}

int m_depth_step(int child_count, double M) {
    // smallest k with M^k >= child_count + 1; integer-exact, no log rounding
    int k = 0;
    double p = 1.0;
    while (p < child_count + 1.0) {
        p *= M;
        ++k;
    }
    return k;
}

std::vector<int> m_based_depths(const RootedTree& tree, double M) {
    if (!(M > 1.0)) throw regime_error("M-based depth requires M > 1");
    std::vector<int> depth(tree.nodes.size(), 0);
    std::deque<int> queue{tree.root()};
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        const int step = m_depth_step(static_cast<int>(tree.nodes[v].children.size()), M);
        for (int c : tree.nodes[v].children) {
            depth[c] = depth[v] + step;
            queue.push_back(c);
        }
    }
    return depth;
}

// --- JSON ---

namespace {

int node_from_json(const nlohmann::json& j, RootedTree& tree) {
    if (!j.is_object() || !j.contains("lambda"))
        throw parse_error("tree node must be an object with a \"lambda\" field");
    const int v = tree.add_node(j.at("lambda").get<double>());
    if (j.contains("pin")) {
        const int pin = j.at("pin").get<int>();
        if (pin != 0 && pin != 1) throw parse_error("tree pin must be 0 or 1");
        tree.nodes[v].pin = pin;
    }
    if (j.contains("children"))
        for (const auto& cj : j.at("children")) {
            const int c = node_from_json(cj, tree);
            tree.nodes[v].children.push_back(c);
        }
    return v;
}

nlohmann::json node_to_json(const RootedTree& tree, int v) {
    nlohmann::json j;
    j["lambda"] = tree.nodes[v].lambda;
    if (tree.nodes[v].pin) j["pin"] = *tree.nodes[v].pin;
    if (!tree.nodes[v].children.empty()) {
        nlohmann::json cs = nlohmann::json::array();
        for (int c : tree.nodes[v].children) cs.push_back(node_to_json(tree, c));
        j["children"] = std::move(cs);
    }
    return j;
}

}  // namespace

RootedTree tree_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("invalid tree JSON: ") + e.what());
    }
    RootedTree tree;
    node_from_json(j, tree);
    return tree;
}

std::string tree_to_json_text(const RootedTree& tree) {
    return node_to_json(tree, tree.root()).dump();
}

// --- generators ---

namespace {

struct SpecParts {
    std::string kind;
    std::vector<int> degrees;
    int depth = -1;
    int dmax = -1;
};

SpecParts parse_spec(const std::string& spec) {
    SpecParts out;
    std::stringstream ss(spec);
    std::string part;
    bool first = true;
    while (std::getline(ss, part, ':')) {
        if (first) {
            out.kind = part;
            first = false;
            continue;
        }
        if (part.rfind("depth=", 0) == 0) {
            out.depth = std::stoi(part.substr(6));
        } else if (part.rfind("dmax=", 0) == 0) {
            out.dmax = std::stoi(part.substr(5));
        } else {
            std::stringstream ds(part);
            std::string tok;
            while (std::getline(ds, tok, ',')) out.degrees.push_back(std::stoi(tok));
        }
    }
    if (first) throw parse_error("empty tree spec");
    return out;
}

void grow_layered(RootedTree& tree, double lambda, const std::vector<int>& layer_degrees,
                  int depth) {
    struct Item {
        int node;
        int level;
    };
    std::deque<Item> queue{{tree.root(), 0}};
    while (!queue.empty()) {
        auto [v, level] = queue.front();
        queue.pop_front();
        if (level >= depth) continue;
        const int d = layer_degrees[level % layer_degrees.size()];
        for (int i = 0; i < d; ++i)
            queue.push_back({tree.add_child(v, lambda), level + 1});
        if (tree.size() > 50'000'000)
            throw budget_error("tree spec expands past 5e7 nodes");
    }
}

// child-count distribution used by random trees: skewed toward small degrees
// (subcritical mean) but supported on all of [0, dmax]
int draw_degree(Rng& rng, int dmax) {
    const double u = rng.uniform();
    int d;
    if (u < 0.55) d = 0;
    else if (u < 0.80) d = 1;
    else if (u < 0.90) d = 2;
    else if (u < 0.94) d = 3;
    else d = 4 + static_cast<int>(rng.below(5));
    return std::min(d, dmax);
}

}  // namespace

RootedTree make_tree(const std::string& spec, double lambda, Rng* rng) {
    const SpecParts parts = parse_spec(spec);
    if (parts.depth < 0) throw parse_error("tree spec is missing depth=<L>: " + spec);
    RootedTree tree;
    tree.add_node(lambda);
    if (parts.kind == "regular") {
        if (parts.degrees.size() != 1) throw parse_error("regular spec needs one degree");
        grow_layered(tree, lambda, parts.degrees, parts.depth);
    } else if (parts.kind == "alt") {
        if (parts.degrees.size() != 2) throw parse_error("alt spec needs two degrees");
        grow_layered(tree, lambda, parts.degrees, parts.depth);
    } else if (parts.kind == "path") {
        grow_layered(tree, lambda, {1}, parts.depth);
    } else if (parts.kind == "random") {
        if (parts.dmax < 0) throw parse_error("random spec needs dmax=<D>");
        if (!rng) throw parse_error("random tree spec needs a seeded generator");
        tree = random_tree(lambda, parts.dmax, parts.depth, 200'000, *rng);
    } else {
        throw parse_error("unknown tree spec kind: " + parts.kind);
    }
    return tree;
}

RootedTree random_tree(double lambda, int dmax, int max_depth, int max_nodes, Rng& rng) {
    RootedTree tree;
    tree.add_node(lambda);
    struct Item {
        int node;
        int level;
    };
    std::deque<Item> queue{{tree.root(), 0}};
    while (!queue.empty()) {
        auto [v, level] = queue.front();
        queue.pop_front();
        if (level >= max_depth || tree.size() >= max_nodes) continue;
        const int d = draw_degree(rng, dmax);
        for (int i = 0; i < d && tree.size() < max_nodes; ++i)
            queue.push_back({tree.add_child(v, lambda), level + 1});
    }
    return tree;
}

void grow_random_suffix(RootedTree& tree, int from_depth, double lambda, int dmax,
                        int extra_depth, int max_nodes, Rng& rng) {
    const auto depth = plain_depths(tree);
    std::vector<int> anchors;
    for (int v = 0; v < tree.size(); ++v)
        if (depth[v] == from_depth) anchors.push_back(v);
    struct Item {
        int node;
        int level;
    };
    std::deque<Item> queue;
    for (int a : anchors) queue.push_back({a, 0});
    bool first = true;
    while (!queue.empty()) {
        auto [v, level] = queue.front();
        queue.pop_front();
        if (level >= extra_depth || tree.size() >= max_nodes) continue;
        int d = draw_degree(rng, dmax);
        if (first) {  // force a nonempty suffix so pairs can actually differ
            d = std::max(d, 1);
            first = false;
        }
        for (int i = 0; i < d && tree.size() < max_nodes; ++i)
            queue.push_back({tree.add_child(v, lambda), level + 1});
    }
}

}  // namespace twospin
