#ifndef TWOSPIN_TREE_HPP
#define TWOSPIN_TREE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twospin/rng.hpp"
#include "twospin/spin_system.hpp"

namespace twospin {

// Marginal ratio R = P(spin 0)/P(spin 1) at a vertex. 0 (pinned to 1) and
// +inf (pinned to 0) are first-class values with exact limit arithmetic in
// the tree recursion, not sentinel floats.
struct Ratio {
    double value = 0.0;

    static Ratio infinite();
    bool is_infinite() const;
    // R/(1+R), evaluated without overflow; inf maps to 1.
    double probability() const;
};

struct TreeNode {
    double lambda = 1.0;
    std::optional<int> pin;
    std::vector<int> children;
    // true when the node has unexplored children (horizon cut); the bounds
    // recursion assigns it the trivial interval [0, inf]
    bool truncated = false;
    // originating graph vertex for SAW trees, -1 otherwise
    VertexId graph_vertex = -1;
};

// Arena-allocated rooted tree; node 0 is the root, children are ordered.
struct RootedTree {
    std::vector<TreeNode> nodes;

    int root() const { return 0; }
    int size() const { return static_cast<int>(nodes.size()); }
    int add_node(double lambda, std::optional<int> pin = std::nullopt);
    int add_child(int parent, double lambda, std::optional<int> pin = std::nullopt);
    int depth() const;
};

// One edge factor of the tree recursion: (beta x + 1)/(x + gamma), with the
// limit values beta at x = inf and 1/gamma at x = 0.
double edge_factor(SpinParams params, Ratio x);

// F_d(x_1..x_d) = lambda_v * prod (beta x_i + 1)/(x_i + gamma); the empty
// product is the leaf base case lambda_v.
Ratio eval_F(SpinParams params, double lambda_v, std::span<const Ratio> children);

// Symmetric recursion f_d(x) = lambda ((beta x + 1)/(x + gamma))^d with real
// valued d, evaluated in log space.
double eval_f(SpinParams params, double lambda, double d, double x);
double eval_f_prime(SpinParams params, double lambda, double d, double x);
double eval_f_second(SpinParams params, double lambda, double d, double x);

// Exact bottom-up ratio of a finite tree; pins enter through their base
// cases. Rejects truncated trees.
Ratio exact_tree_marginal(const RootedTree& tree, SpinParams params);

// Removes every pinned vertex, folding it into the parent's field:
// a pinned-0 child multiplies the parent field by beta, a pinned-1 child by
// 1/gamma. The root ratio is unchanged. A pinned root is returned as-is.
RootedTree absorb_pins(const RootedTree& tree, SpinParams params);

struct BoundsPair {
    Ratio lower;
    Ratio upper;

    double gap() const;
    double probability_gap() const;
};

// Interval recursion: expanded nodes propagate endpoint-wise through F_d
// (valid by monotonicity); nodes cut by the horizon predicate or marked
// truncated contribute [0, inf]; pinned nodes contribute their exact point.
// `expand` must be pure.
using HorizonPredicate = std::function<bool(const RootedTree&, int node)>;
BoundsPair bounds_recursion(const RootedTree& tree, SpinParams params,
                            const HorizonPredicate& expand);
BoundsPair bounds_recursion(const RootedTree& tree, SpinParams params);  // expand everything

std::vector<int> plain_depths(const RootedTree& tree);

// M-based depth: root 0, child adds ceil(log_M(d+1)) where d is the parent's
// child count. Guarantees |{v : depth_M(v) <= l}| <= M^l.
std::vector<int> m_based_depths(const RootedTree& tree, double M);

int m_depth_step(int child_count, double M);

// --- serialization & generators ---

// Nested JSON: {"lambda": float, "pin": 0|1 (optional), "children": [...]}
RootedTree tree_from_json_text(const std::string& text);
std::string tree_to_json_text(const RootedTree& tree);

// Generator grammar:
//   "regular:<d>:depth=<L>"            d children everywhere down to depth L
//   "alt:<d0>,<d1>:depth=<L>"          d0 children on even layers, d1 on odd
//   "path:depth=<L>"                   unary path
//   "random:dmax=<D>:depth=<L>"        random child counts in [0, D]
// Uniform field `lambda` at every node.
RootedTree make_tree(const std::string& spec, double lambda, Rng* rng = nullptr);

// Random tree with child counts drawn from a distribution skewed toward
// small degrees but supported on [0, dmax]; expansion stops at max_depth or
// when the node budget is reached.
RootedTree random_tree(double lambda, int dmax, int max_depth, int max_nodes, Rng& rng);

// Extends `tree` in place: each current leaf at depth `from_depth` gets an
// independent random subtree. Used to build pairs agreeing on a prefix.
void grow_random_suffix(RootedTree& tree, int from_depth, double lambda, int dmax,
                        int extra_depth, int max_nodes, Rng& rng);

}  // namespace twospin

#endif
