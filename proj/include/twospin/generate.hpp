#ifndef TWOSPIN_GENERATE_HPP
#define TWOSPIN_GENERATE_HPP

#include <cstdint>

#include "twospin/rng.hpp"
#include "twospin/spin_system.hpp"

namespace twospin {

// Random connected-ish multigraph on n vertices with m edges (no self-loops):
// a random spanning tree over the first min(n,m+1) vertices, then uniform
// extra edges (parallel edges allowed). Fields log-uniform in
// [lambda_lo, lambda_hi]; pin_fraction of the vertices get a random pin.
SpinSystem random_graph(SpinParams params, int n, int m, double lambda_lo, double lambda_hi,
                        Rng& rng, double pin_fraction = 0.0);

// Same but with maximum degree capped at max_degree.
SpinSystem random_graph_bounded_degree(SpinParams params, int n, int m, int max_degree,
                                       double lambda_lo, double lambda_hi, Rng& rng);

}  // namespace twospin

#endif
