#include "hcap/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>

namespace hcap {

std::uint64_t default_oracle_budget() {
    if (const char* env = std::getenv("HCAP_ORACLE_BUDGET")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            // fall through to the built-in default
        }
    }
    return 20'000'000;
}

namespace {

double binomial(Units n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / i;
    return r;
}

struct Search {
    const LayeredGraph& graph;
    const LayoutOptions& options;
    Units cap;
    std::vector<std::pair<NodeIndex, NodeIndex>> vertical;
    std::vector<std::pair<NodeIndex, NodeIndex>> edges;

    std::vector<Units> x;
    OracleResult best;

    void layer(int i) {
        if (i == graph.layer_count()) return leaf();
        place(i, 0, 0);
    }

    void place(int i, int pos, Units min_x) {
        const int n = graph.layer_size(i);
        if (pos == n) return layer(i + 1);
        // leave room for the remaining nodes of this layer
        const Units max_x = cap - (n - 1 - pos);
        for (Units v = min_x; v <= max_x; ++v) {
            if (pos > 0) {
                const Units gap = v - x[graph.index_at(i, pos - 1)];
                if (gap < options.min_gap(i, pos)) continue;
                if (auto hi = options.max_gap(i, pos); hi && gap > *hi) break;
            }
            x[graph.index_at(i, pos)] = v;
            place(i, pos + 1, v + 1);
        }
    }

    void leaf() {
        ++best.explored;
        for (const auto& [u, v] : vertical) {
            if (x[u] != x[v]) return;
        }
        Units length = 0;
        for (const auto& [u, v] : edges) length += std::abs(x[u] - x[v]);
        if (!best.feasible || length < best.optimal_length) {
            best.feasible = true;
            best.optimal_length = length;
            best.witness.x = x;
        }
    }
};

}  // namespace

OracleResult brute_force_optimal(const LayeredGraph& graph, const LayoutOptions& options,
                                 std::uint64_t budget) {
    if (!validate(graph).ok) throw std::invalid_argument("oracle: invalid layered graph");
    if (!options.width_cap) throw std::invalid_argument("oracle: a finite width cap is required");
    const Units cap = *options.width_cap;

    double space = 1.0;
    for (int i = 0; i < graph.layer_count(); ++i) space *= binomial(cap + 1, graph.layer_size(i));
    if (space > static_cast<double>(budget)) {
        std::ostringstream msg;
        msg << "oracle: ";
        if (space < 1e18) msg << static_cast<std::uint64_t>(space);
        else msg << std::setprecision(3) << space;
        msg << " assignments exceed the budget of " << budget;
        throw BudgetExceeded(msg.str());
    }

    Search search{graph, options, cap, {}, {}, std::vector<Units>(graph.node_count(), 0), {}};
    for (const auto& e : options.vertical_edges) {
        if (!graph.find_edge(e.source, e.target)) {
            throw std::invalid_argument("oracle: vertical edge is not a graph edge");
        }
        search.vertical.emplace_back(graph.index_of(e.source), graph.index_of(e.target));
    }
    for (const auto& e : graph.edges()) {
        search.edges.emplace_back(graph.index_of(e.source), graph.index_of(e.target));
    }
    if (space > 0.0) search.layer(0);

    OracleResult result = std::move(search.best);
    if (result.feasible) result.witness = make_layout(graph, std::move(result.witness.x));
    return result;
}

Flow flow_from_layout(const LayeredGraph& graph, const FlowNetwork& network, const Layout& layout) {
    if (static_cast<int>(layout.x.size()) != graph.node_count()) {
        throw std::invalid_argument("flow_from_layout: layout does not cover the graph");
    }
    const Layout drawing = normalized(layout);
    const Units width = drawing.metrics.width;
    if (network.width_gate()) {
        const auto gate = network.edges_of_kind(ArcKind::GateArc);
        if (!gate.empty() && width + 2 > network.capacity(network.edge(gate.front()))) {
            throw std::invalid_argument("flow_from_layout: layout is wider than the width cap");
        }
    }

    std::vector<FlowNetwork::BoundOverride> pins;
    for (int i = 0; i < graph.layer_count(); ++i) {
        const int n = graph.layer_size(i);
        for (int g = 0; g <= n; ++g) {
            Units f = 0;
            if (n == 0) {
                f = width + 2;
            } else if (g == 0) {
                f = drawing.x[graph.index_at(i, 0)] + 1;
            } else if (g == n) {
                f = width - drawing.x[graph.index_at(i, n - 1)] + 1;
            } else {
                f = drawing.x[graph.index_at(i, g)] - drawing.x[graph.index_at(i, g - 1)];
            }
            const NetEdge& a = network.edge(network.a_edge(i, g));
            if (f < a.lower || (a.upper && f > *a.upper)) {
                throw std::invalid_argument("flow_from_layout: gap (" + std::to_string(i) + "," +
                                            std::to_string(g) + ") of size " + std::to_string(f) +
                                            " violates the network bounds");
            }
            pins.push_back({a.id, f, f});
        }
    }

    const FlowNetwork pinned =
        network.with_bounds(pins).with_big_upper(std::max(network.big_upper(), width + 2));
    Flow flow = solve_min_cost_flow(pinned);
    if (!flow.optimal()) {
        throw std::logic_error("flow_from_layout: routing between layers is infeasible (" +
                               describe_infeasibility(pinned, flow) + ")");
    }
    return flow;
}

}  // namespace hcap
