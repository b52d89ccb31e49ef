#ifndef TWOSPIN_SPIN_SYSTEM_HPP
#define TWOSPIN_SPIN_SYSTEM_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace twospin {

using VertexId = int;

// Edge interaction weights: beta for a (0,0) edge, gamma for a (1,1) edge,
// cross edges normalized to 1. Only the ferromagnetic regime beta*gamma > 1
// is accepted.
struct SpinParams {
    double beta;
    double gamma;

    SpinParams(double beta_, double gamma_);
};

// A 2-spin instance: graph + per-vertex field lambda_v (attached to spin 0)
// + optional pinning of some vertices. Vertices are addressed externally by
// VertexId and internally by dense index. Multi-edges are allowed; self-loops
// are rejected on input but may arise internally from edge contraction, in
// which case they count as monochromatic edges of either color.
class SpinSystem {
public:
    SpinSystem(SpinParams params,
               std::vector<std::pair<VertexId, double>> vertices,
               std::vector<std::pair<VertexId, VertexId>> edges,
               std::vector<std::pair<VertexId, int>> pins = {},
               bool allow_self_loops = false);

    const SpinParams& params() const { return params_; }
    int size() const { return static_cast<int>(lambda_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    VertexId id_of(int idx) const { return ids_[idx]; }
    int index_of(VertexId id) const;
    bool has_vertex(VertexId id) const { return index_.count(id) > 0; }

    double lambda(int idx) const { return lambda_[idx]; }
    double max_lambda() const;
    const std::optional<int>& pin(int idx) const { return pin_[idx]; }
    bool is_free(int idx) const { return !pin_[idx].has_value(); }
    int free_count() const;

    const std::array<int, 2>& edge(int e) const { return edges_[e]; }
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }

    // adjacency entry: (neighbor index, edge index), sorted by (neighbor id,
    // edge index); the position in this list is the edge's local rank used by
    // the SAW cycle-closing convention.
    const std::vector<std::pair<int, int>>& adjacency(int idx) const { return adj_[idx]; }
    int degree(int idx) const { return static_cast<int>(adj_[idx].size()); }
    int max_degree() const;

    SpinSystem with_pin(VertexId id, int spin) const;

private:
    SpinParams params_;
    std::vector<double> lambda_;
    std::vector<VertexId> ids_;
    std::unordered_map<VertexId, int> index_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::optional<int>> pin_;
    std::vector<std::vector<std::pair<int, int>>> adj_;
};

// Total spin assignment, by internal vertex index.
using Configuration = std::vector<int>;

// Natural-log weight with an explicit zero marker, so that zero factors
// (lambda_v = 0 from a beta=1 contraction) never poison the log arithmetic.
struct WeightAccumulator {
    double log_weight = 0.0;
    bool zero_flag = false;

    double value() const;
};

WeightAccumulator weight(const SpinSystem& sys, const Configuration& sigma);

// log Z over all configurations consistent with the pins. Enumeration is
// over free vertices only; throws budget_error above kOracleFreeLimit.
inline constexpr int kOracleFreeLimit = 25;
double exact_partition(const SpinSystem& sys);

// Pr[sigma(v) = 0] under the Gibbs measure conditioned on the pins.
double exact_marginal(const SpinSystem& sys, VertexId v);

// Z^{sigma(v)=0} / Z^{sigma(v)=1}; +inf when the spin-1 side has weight 0.
double exact_ratio(const SpinSystem& sys, VertexId v);

// Random-cluster split along edge e: G- deletes e, G+ contracts it with the
// merged field lambda_u * lambda_v * (beta-1)/(gamma-1). The identity
// Z(G) = Z(G-) + (gamma-1) Z(G+) holds exactly.
struct RandomClusterSplit {
    SpinSystem minus;
    SpinSystem plus;
    VertexId contracted;
};
RandomClusterSplit random_cluster_split(const SpinSystem& sys, int edge_index);

// Sweeps random unpinned instances and checks the marginal upper bound
// p_v <= lambda/(lambda+1), valid for 1 <= beta <= gamma, beta*gamma > 1 and
// lambda <= (gamma-1)/(beta-1) (unconstrained at beta = 1).
struct MarginalSweepReport {
    int graphs = 0;
    int vertices_checked = 0;
    double max_marginal = 0.0;
    double bound = 0.0;
    int violations = 0;
};
MarginalSweepReport marginal_bound_sweep(SpinParams params, double lambda, int trials,
                                         int size_bound, std::uint64_t seed);

}  // namespace twospin

#endif
