#pragma once

#include <string>
#include <vector>

#include "hcap/flow_network.hpp"

namespace hcap {

enum class FlowStatus { Optimal, Infeasible };

/// Integral edge flow on a FlowNetwork, indexed by network edge id.
struct Flow {
    FlowStatus status = FlowStatus::Infeasible;
    std::vector<Units> values;
    Units total_cost = 0;
    /// Network nodes whose lower-bound supply or demand could not be met.
    /// Only filled for infeasible results.
    std::vector<int> unsaturated;

    bool optimal() const { return status == FlowStatus::Optimal; }
    Units operator[](int edge_id) const { return values[edge_id]; }
};

enum class SolverBackend { SuccessiveShortestPaths, NetworkSimplex };

/// Minimum-cost s-t flow of free value: a zero-cost return edge t -> s with
/// capacity big_upper turns the problem into a circulation. Unbounded
/// capacities are replaced by network.big_upper(). Deterministic.
Flow solve_min_cost_flow(const FlowNetwork& network,
                         SolverBackend backend = SolverBackend::SuccessiveShortestPaths);

/// Net flow leaving s.
Units flow_value(const FlowNetwork& network, const std::vector<Units>& values);

Units flow_cost(const FlowNetwork& network, const std::vector<Units>& values);

/// Bounds hold on every edge and flow is conserved everywhere except s and t.
bool check_feasibility(const FlowNetwork& network, const std::vector<Units>& values);

/// No negative-cost cycle in the residual network, the return edge t -> s
/// included. Assumes a feasible flow.
bool check_optimality(const FlowNetwork& network, const std::vector<Units>& values);

/// Human-readable list of unsaturated nodes for diagnostics.
std::string describe_infeasibility(const FlowNetwork& network, const Flow& flow);

}  // namespace hcap
