#pragma once

#include <string>
#include <vector>

#include "hcap/flow_network.hpp"
#include "hcap/layered_graph.hpp"
#include "hcap/mcf_solver.hpp"

namespace hcap {

struct LayoutMetrics {
    Units total_length = 0;
    Units width = 0;

    friend bool operator==(const LayoutMetrics&, const LayoutMetrics&) = default;
};

/// Integer drawing: x and y per node, indexed by NodeIndex.
struct Layout {
    std::vector<Units> x;
    std::vector<int> y;
    LayoutMetrics metrics;

    Units x_of(const LayeredGraph& graph, const NodeId& label) const {
        return x[graph.index_of(label)];
    }
    friend bool operator==(const Layout&, const Layout&) = default;
};

/// Coordinates induced by a feasible flow: x of the node at position p is the
/// total A-flow of gaps 0..p of its layer. Throws std::invalid_argument for
/// infeasible flows.
Layout extract_coordinates(const LayeredGraph& graph, const FlowNetwork& network,
                           const std::vector<Units>& flow, bool normalize = true);

LayoutMetrics layout_metrics(const Layout& layout, const LayeredGraph& graph);

/// Builds a Layout from raw x values (y from layers, metrics computed).
Layout make_layout(const LayeredGraph& graph, std::vector<Units> x);

/// Shift so that min x = 0.
Layout normalized(const Layout& layout);

struct PropertyCheck {
    std::string name;
    bool checked = true;
    bool passed = true;
    std::string witness;  // first violation, empty on success
};

struct PropertyReport {
    PropertyCheck p1{"P1", true, true, {}};
    PropertyCheck p2{"P2", true, true, {}};
    PropertyCheck p3{"P3", true, true, {}};
    PropertyCheck p4{"P4", true, true, {}};
    PropertyCheck l1{"L1", true, true, {}};
    PropertyCheck opt_eq{"OPT_EQ", true, true, {}};

    std::vector<const PropertyCheck*> all() const { return {&p1, &p2, &p3, &p4, &l1, &opt_eq}; }
    bool ok() const;
};

/// Exact integer checks of the flow/drawing identities:
///   P1  cost(g) equals the number of graph edges g passes over (B and C)
///   P2  every layer carries f(s) units through its w nodes and z nodes
///   P3  max per-layer interior flow <= f(s), and drawing width <= f(s)
///   P4  cut balance across every graph edge
///   L1  cost_f >= length(E)
///   OPT_EQ  cost_f == length(E), only when `is_optimal`
/// f(w) and f(z) are read as the flow on the gap's A-edge.
PropertyReport verify_properties(const LayeredGraph& graph, const FlowNetwork& network,
                                 const std::vector<Units>& flow, bool is_optimal);

}  // namespace hcap
