#ifndef TWOSPIN_SAW_HPP
#define TWOSPIN_SAW_HPP

#include <cstddef>

#include "twospin/spin_system.hpp"
#include "twospin/tree.hpp"

namespace twospin {

// How far to unroll the self-avoiding-walk tree.
//   full        no truncation (the walk length bounds the depth anyway)
//   plain_depth nodes at depth <= t are expanded, deeper ones are cut
//   m_based     nodes with M-based depth <= ell, plus one extra level, are
//               expanded; the level after that is cut
struct SawHorizon {
    enum class Kind { full, plain_depth, m_based };
    Kind kind = Kind::full;
    int t = 0;
    int ell = 0;
    double M = 2.0;

    static SawHorizon full();
    static SawHorizon plain(int t);
    static SawHorizon m_based(int ell, double M);
};

inline constexpr std::size_t kDefaultSawBudget = 4'000'000;

// Weitz self-avoiding-walk tree of (G, root) up to the horizon. Pinned graph
// vertices become pinned leaves wherever a walk reaches them. A walk that
// returns to an on-path vertex w ends in a leaf pinned to 0 when the closing
// edge ranks above the edge through which the walk departed w (local ranks:
// ascending neighbor id, then edge index), and to 1 otherwise.
RootedTree build_saw(const SpinSystem& sys, VertexId root, const SawHorizon& horizon,
                     std::size_t node_budget = kDefaultSawBudget);

// Exact graph ratio R_{G,v} via the fully expanded SAW tree.
Ratio saw_ratio_exact(const SpinSystem& sys, VertexId root,
                      std::size_t node_budget = kDefaultSawBudget);

}  // namespace twospin

#endif
