#pragma once

#include <cstdint>
#include <stdexcept>

#include "hcap/coordinates.hpp"
#include "hcap/flow_network.hpp"
#include "hcap/layered_graph.hpp"
#include "hcap/mcf_solver.hpp"

namespace hcap {

/// Default cap on the number of enumerated assignments. The environment
/// variable HCAP_ORACLE_BUDGET overrides it.
std::uint64_t default_oracle_budget();

class BudgetExceeded : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct OracleResult {
    bool feasible = false;
    Units optimal_length = 0;
    Layout witness;
    std::uint64_t explored = 0;
};

/// Exhaustive search over all per-layer strictly increasing assignments into
/// columns [0, W], W = options.width_cap (required). Distance bounds and
/// vertical edges filter candidates. The witness is the lexicographically
/// smallest optimum in (layer, position) order.
OracleResult brute_force_optimal(const LayeredGraph& graph, const LayoutOptions& options,
                                 std::uint64_t budget = default_oracle_budget());

/// Feasible flow inducing `layout` whose cost equals its total edge length:
/// A-flows are pinned to the coordinate gaps and the remaining edges are
/// routed by a min-cost solve. Throws std::invalid_argument for layouts
/// that violate the network's bounds and std::logic_error if routing fails.
Flow flow_from_layout(const LayeredGraph& graph, const FlowNetwork& network, const Layout& layout);

}  // namespace hcap
