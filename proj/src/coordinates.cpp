#include "hcap/coordinates.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hcap {

Layout make_layout(const LayeredGraph& graph, std::vector<Units> x) {
    Layout layout;
    layout.x = std::move(x);
    layout.y.resize(graph.node_count());
    for (NodeIndex v = 0; v < graph.node_count(); ++v) layout.y[v] = graph.slot(v).layer;
    layout.metrics = layout_metrics(layout, graph);
    return layout;
}

Layout normalized(const Layout& layout) {
    if (layout.x.empty()) return layout;
    Layout out = layout;
    const Units lo = *std::min_element(out.x.begin(), out.x.end());
    for (auto& x : out.x) x -= lo;
    return out;
}

Layout extract_coordinates(const LayeredGraph& graph, const FlowNetwork& network,
                           const std::vector<Units>& flow, bool normalize) {
    if (!check_feasibility(network, flow)) {
        throw std::invalid_argument("extract_coordinates: flow is not feasible");
    }
    std::vector<Units> x(graph.node_count());
    for (int i = 0; i < graph.layer_count(); ++i) {
        Units running = 0;
        for (int p = 0; p < graph.layer_size(i); ++p) {
            running += flow[network.a_edge(i, p)];
            x[graph.index_at(i, p)] = running;
        }
    }
    Layout layout = make_layout(graph, std::move(x));
    return normalize ? normalized(layout) : layout;
}

LayoutMetrics layout_metrics(const Layout& layout, const LayeredGraph& graph) {
    if (static_cast<int>(layout.x.size()) != graph.node_count()) {
        throw std::invalid_argument("layout does not cover the graph");
    }
    LayoutMetrics m;
    for (const auto& e : graph.edges()) {
        m.total_length += std::abs(layout.x[graph.index_of(e.target)] - layout.x[graph.index_of(e.source)]);
    }
    if (!layout.x.empty()) {
        const auto [lo, hi] = std::minmax_element(layout.x.begin(), layout.x.end());
        m.width = *hi - *lo;
    }
    return m;
}

bool PropertyReport::ok() const {
    const auto checks = all();
    return std::all_of(checks.begin(), checks.end(),
                       [](const PropertyCheck* c) { return !c->checked || c->passed; });
}

namespace {

void fail(PropertyCheck& check, const std::string& witness) {
    if (!check.passed) return;
    check.passed = false;
    check.witness = witness;
}

std::string edge_name(const Edge& e) { return e.source + "->" + e.target; }

}  // namespace

PropertyReport verify_properties(const LayeredGraph& graph, const FlowNetwork& network,
                                 const std::vector<Units>& flow, bool is_optimal) {
    PropertyReport report;
    const Units fs = flow_value(network, flow);
    auto a_flow = [&](int layer, int gap) { return flow[network.a_edge(layer, gap)]; };

    // P1
    std::vector<Units> crossings(network.edge_count(), 0);
    std::vector<CrossingSets> sets;
    sets.reserve(graph.edge_count());
    for (int e = 0; e < graph.edge_count(); ++e) {
        sets.push_back(crossing_sets(graph, network, e));
        for (int g : sets.back().right) ++crossings[g];
        for (int g : sets.back().left) ++crossings[g];
    }
    for (const auto& g : network.edges()) {
        const bool b_or_c = g.kind == ArcKind::BWRight || g.kind == ArcKind::BWLeft ||
                            g.kind == ArcKind::BZRight || g.kind == ArcKind::BZLeft ||
                            g.kind == ArcKind::C;
        if (b_or_c && g.cost != crossings[g.id]) {
            std::ostringstream os;
            os << to_string(g.kind) << " edge " << g.id << " cost " << g.cost << " crosses "
               << crossings[g.id];
            fail(report.p1, os.str());
        }
    }

    // P2 and P3
    Units widest_interior = 0;
    for (int i = 0; i < graph.layer_count(); ++i) {
        Units through = 0;
        Units interior = 0;
        const int n = graph.layer_size(i);
        for (int g = 0; g <= n; ++g) {
            through += a_flow(i, g);
            if (g > 0 && g < n) interior += a_flow(i, g);
        }
        if (through != fs) {
            fail(report.p2, "layer " + std::to_string(i) + " carries " + std::to_string(through) +
                                ", f(s) = " + std::to_string(fs));
        }
        widest_interior = std::max(widest_interior, interior);
    }
    if (widest_interior > fs) {
        fail(report.p3, "interior flow " + std::to_string(widest_interior) + " > f(s) " + std::to_string(fs));
    }

    const bool feasible = check_feasibility(network, flow);
    const Layout layout = feasible ? extract_coordinates(graph, network, flow, true) : Layout{};
    if (!feasible) {
        fail(report.p3, "infeasible flow");
        fail(report.l1, "infeasible flow");
    } else if (layout.metrics.width > fs) {
        fail(report.p3, "width " + std::to_string(layout.metrics.width) + " > f(s) " + std::to_string(fs));
    }

    // P4
    for (const auto& pe : graph.proper_edges()) {
        Units below = 0;
        for (int l = 0; l <= pe.tgt; ++l) below += a_flow(pe.layer + 1, l);
        Units above = 0;
        for (int l = 0; l <= pe.src; ++l) above += a_flow(pe.layer, l);
        Units right = 0;
        Units left = 0;
        for (int g : sets[pe.index].right) right += flow[g];
        for (int g : sets[pe.index].left) left += flow[g];
        if (below != above + left - right) {
            fail(report.p4, "edge " + edge_name(graph.edges()[pe.index]) + ": " + std::to_string(below) +
                                " != " + std::to_string(above) + " + " + std::to_string(left) + " - " +
                                std::to_string(right));
        }
    }

    // L1 and OPT_EQ
    const Units cost = flow_cost(network, flow);
    if (feasible) {
        const Units length = layout.metrics.total_length;
        if (cost < length) {
            fail(report.l1, "cost " + std::to_string(cost) + " < length " + std::to_string(length));
        }
        report.opt_eq.checked = is_optimal;
        if (is_optimal && cost != length) {
            fail(report.opt_eq, "cost " + std::to_string(cost) + " != length " + std::to_string(length));
        }
    } else {
        report.opt_eq.checked = is_optimal;
        if (is_optimal) fail(report.opt_eq, "infeasible flow");
    }
    return report;
}

}  // namespace hcap
