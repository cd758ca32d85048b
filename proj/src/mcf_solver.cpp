#include "hcap/mcf_solver.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace hcap {

namespace {

constexpr Units kInf = std::numeric_limits<Units>::max() / 4;

/// The circulation obtained from a network: its edges plus the return edge
/// t -> s (last index), with lower bounds shifted into node supplies.
struct Circulation {
    int nodes = 0;
    std::vector<int> from, to;
    std::vector<Units> cap;  // upper - lower
    std::vector<Units> cost;
    std::vector<Units> lower;
    std::vector<Units> supply;  // positive: must send out, negative: must receive

    explicit Circulation(const FlowNetwork& net) : nodes(net.node_count()), supply(nodes, 0) {
        for (const auto& e : net.edges()) {
            const Units upper = net.capacity(e);
            if (upper < e.lower) throw std::invalid_argument("edge with upper bound below lower bound");
            add(e.from, e.to, e.lower, upper, e.cost);
        }
        add(net.sink(), net.source(), 0, net.big_upper(), 0);
    }

    int arcs() const { return static_cast<int>(from.size()); }

    void add(int u, int v, Units lo, Units hi, Units c) {
        from.push_back(u);
        to.push_back(v);
        cap.push_back(hi - lo);
        cost.push_back(c);
        lower.push_back(lo);
        supply[v] += lo;
        supply[u] -= lo;
    }

    Flow finish(const FlowNetwork& net, const std::vector<Units>& shifted) const {
        Flow flow;
        flow.status = FlowStatus::Optimal;
        flow.values.resize(net.edge_count());
        for (int e = 0; e < net.edge_count(); ++e) flow.values[e] = shifted[e] + lower[e];
        flow.total_cost = flow_cost(net, flow.values);
        return flow;
    }
};

// Successive shortest paths with Dijkstra on reduced costs. All input costs
// are non-negative, so zero potentials are valid initially.
Flow solve_ssp(const FlowNetwork& net) {
    const Circulation circ(net);
    const int n = circ.nodes + 2;
    const int super_s = circ.nodes;
    const int super_t = circ.nodes + 1;

    struct Arc {
        int to;
        Units cap;
        Units cost;
        int rank;  // tie-break key: original edge id, super arcs last
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> adj(n);
    auto add_arc = [&](int u, int v, Units cap, Units cost, int rank) {
        adj[u].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({v, cap, cost, rank});
        adj[v].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({u, 0, -cost, rank});
    };
    for (int e = 0; e < circ.arcs(); ++e) add_arc(circ.from[e], circ.to[e], circ.cap[e], circ.cost[e], e);

    Units required = 0;
    std::vector<int> supply_arc(circ.nodes, -1);
    for (int v = 0; v < circ.nodes; ++v) {
        const int rank = circ.arcs() + v;
        if (circ.supply[v] > 0) {
            supply_arc[v] = static_cast<int>(arcs.size());
            add_arc(super_s, v, circ.supply[v], 0, rank);
            required += circ.supply[v];
        } else if (circ.supply[v] < 0) {
            supply_arc[v] = static_cast<int>(arcs.size());
            add_arc(v, super_t, -circ.supply[v], 0, rank);
        }
    }

    std::vector<Units> potential(n, 0), dist(n);
    std::vector<int> pred(n);
    std::vector<char> done(n);
    Units sent = 0;
    while (sent < required) {
        std::fill(dist.begin(), dist.end(), kInf);
        std::fill(pred.begin(), pred.end(), -1);
        std::fill(done.begin(), done.end(), 0);
        using Item = std::pair<Units, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        dist[super_s] = 0;
        queue.push({0, super_s});
        while (!queue.empty()) {
            auto [d, u] = queue.top();
            queue.pop();
            if (done[u]) continue;
            done[u] = 1;
            for (int a : adj[u]) {
                const Arc& arc = arcs[a];
                if (arc.cap <= 0 || done[arc.to]) continue;
                const Units nd = d + arc.cost + potential[u] - potential[arc.to];
                const int v = arc.to;
                if (nd < dist[v] || (nd == dist[v] && pred[v] >= 0 && arc.rank < arcs[pred[v]].rank)) {
                    const bool improved = nd < dist[v];
                    dist[v] = nd;
                    pred[v] = a;
                    if (improved) queue.push({nd, v});
                }
            }
        }
        if (dist[super_t] >= kInf) break;

        const Units cutoff = dist[super_t];
        for (int v = 0; v < n; ++v) potential[v] += std::min(dist[v], cutoff);

        Units push = required - sent;
        for (int v = super_t; v != super_s; v = arcs[pred[v] ^ 1].to) push = std::min(push, arcs[pred[v]].cap);
        for (int v = super_t; v != super_s; v = arcs[pred[v] ^ 1].to) {
            arcs[pred[v]].cap -= push;
            arcs[pred[v] ^ 1].cap += push;
        }
        sent += push;
    }

    if (sent < required) {
        Flow flow;
        flow.status = FlowStatus::Infeasible;
        for (int v = 0; v < circ.nodes; ++v) {
            if (supply_arc[v] >= 0 && arcs[supply_arc[v]].cap > 0) flow.unsaturated.push_back(v);
        }
        return flow;
    }

    std::vector<Units> shifted(circ.arcs());
    for (int e = 0; e < circ.arcs(); ++e) shifted[e] = arcs[2 * e + 1].cap;
    return circ.finish(net, shifted);
}

// Primal network simplex with an artificial root, Bland's entering rule and
// strongly feasible trees (last blocking arc leaves), which rules out
// cycling. The tree is rebuilt from the arc set after every pivot.
Flow solve_network_simplex(const FlowNetwork& net) {
    const Circulation circ(net);
    const int n = circ.nodes;
    const int root = n;
    const int real_arcs = circ.arcs();

    std::vector<int> from = circ.from, to = circ.to;
    std::vector<Units> cap = circ.cap, cost = circ.cost;
    Units big_m = 1;
    Units total_supply = 0;
    for (Units c : cost) big_m += c;
    for (Units b : circ.supply) total_supply += std::abs(b);
    const Units art_cap = total_supply + 1;

    std::vector<Units> flow(real_arcs, 0);
    std::vector<char> in_tree(real_arcs, 0);
    for (int v = 0; v < n; ++v) {
        const Units b = circ.supply[v];
        if (b >= 0) {
            from.push_back(v);
            to.push_back(root);
        } else {
            from.push_back(root);
            to.push_back(v);
        }
        cap.push_back(art_cap);
        cost.push_back(big_m);
        flow.push_back(std::abs(b));
        in_tree.push_back(1);
    }
    const int m = static_cast<int>(from.size());
    // at_upper only matters for non-tree arcs
    std::vector<char> at_upper(m, 0);

    std::vector<int> parent(n + 1), pred(n + 1), depth(n + 1);
    std::vector<char> up(n + 1);  // pred arc points from node to parent
    std::vector<Units> pi(n + 1);
    std::vector<std::vector<int>> tree_adj(n + 1);

    auto rebuild = [&] {
        for (auto& list : tree_adj) list.clear();
        for (int e = 0; e < m; ++e) {
            if (!in_tree[e]) continue;
            tree_adj[from[e]].push_back(e);
            tree_adj[to[e]].push_back(e);
        }
        std::vector<int> stack{root};
        std::vector<char> seen(n + 1, 0);
        seen[root] = 1;
        parent[root] = -1;
        pred[root] = -1;
        depth[root] = 0;
        pi[root] = 0;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int e : tree_adj[u]) {
                const int v = from[e] == u ? to[e] : from[e];
                if (seen[v]) continue;
                seen[v] = 1;
                parent[v] = u;
                pred[v] = e;
                up[v] = from[e] == v;
                depth[v] = depth[u] + 1;
                // reduced cost cost + pi[from] - pi[to] is zero on tree arcs
                pi[v] = up[v] ? pi[u] - cost[e] : pi[u] + cost[e];
                stack.push_back(v);
            }
        }
    };
    rebuild();

    auto reduced = [&](int e) { return cost[e] + pi[from[e]] - pi[to[e]]; };

    while (true) {
        int entering = -1;
        for (int e = 0; e < m; ++e) {
            if (in_tree[e]) continue;
            const Units rc = reduced(e);
            if ((!at_upper[e] && rc < 0 && cap[e] > 0) || (at_upper[e] && rc > 0)) {
                entering = e;
                break;
            }
        }
        if (entering < 0) break;

        const bool increase = !at_upper[entering];
        const int first = increase ? from[entering] : to[entering];
        const int second = increase ? to[entering] : from[entering];

        int a = first, b = second;
        while (a != b) {
            if (depth[a] >= depth[b]) a = parent[a];
            else b = parent[b];
        }
        const int join = a;

        Units delta = cap[entering];
        int leaving_node = -1;
        int side = 0;
        for (int u = first; u != join; u = parent[u]) {
            const int e = pred[u];
            const Units d = up[u] ? flow[e] : cap[e] - flow[e];
            if (d < delta) {
                delta = d;
                leaving_node = u;
                side = 1;
            }
        }
        for (int u = second; u != join; u = parent[u]) {
            const int e = pred[u];
            const Units d = up[u] ? cap[e] - flow[e] : flow[e];
            if (d <= delta) {
                delta = d;
                leaving_node = u;
                side = 2;
            }
        }

        // Push delta along first -> (entering) -> second -> join -> first.
        flow[entering] += increase ? delta : -delta;
        for (int u = first; u != join; u = parent[u]) flow[pred[u]] += up[u] ? -delta : delta;
        for (int u = second; u != join; u = parent[u]) flow[pred[u]] += up[u] ? delta : -delta;

        if (side == 0) {
            at_upper[entering] = increase;
            continue;
        }
        const int leaving = pred[leaving_node];
        in_tree[leaving] = 0;
        at_upper[leaving] = flow[leaving] != 0;
        in_tree[entering] = 1;
        rebuild();
    }

    for (int e = real_arcs; e < m; ++e) {
        if (flow[e] > 0) {
            Flow result;
            result.status = FlowStatus::Infeasible;
            result.unsaturated.push_back(from[e] == root ? to[e] : from[e]);
            for (int f = e + 1; f < m; ++f) {
                if (flow[f] > 0) result.unsaturated.push_back(from[f] == root ? to[f] : from[f]);
            }
            return result;
        }
    }
    flow.resize(real_arcs);
    return circ.finish(net, flow);
}

}  // namespace

Flow solve_min_cost_flow(const FlowNetwork& network, SolverBackend backend) {
    switch (backend) {
        case SolverBackend::SuccessiveShortestPaths: return solve_ssp(network);
        case SolverBackend::NetworkSimplex: return solve_network_simplex(network);
    }
    throw std::invalid_argument("unknown solver backend");
}

Units flow_value(const FlowNetwork& network, const std::vector<Units>& values) {
    Units out = 0;
    for (const auto& e : network.edges()) {
        if (e.from == network.source()) out += values[e.id];
        if (e.to == network.source()) out -= values[e.id];
    }
    return out;
}

Units flow_cost(const FlowNetwork& network, const std::vector<Units>& values) {
    Units total = 0;
    for (const auto& e : network.edges()) total += values[e.id] * e.cost;
    return total;
}

bool check_feasibility(const FlowNetwork& network, const std::vector<Units>& values) {
    if (static_cast<int>(values.size()) != network.edge_count()) return false;
    std::vector<Units> balance(network.node_count(), 0);
    for (const auto& e : network.edges()) {
        const Units f = values[e.id];
        if (f < e.lower || (e.upper && f > *e.upper)) return false;
        balance[e.from] -= f;
        balance[e.to] += f;
    }
    for (int v = 0; v < network.node_count(); ++v) {
        if (v == network.source() || v == network.sink()) continue;
        if (balance[v] != 0) return false;
    }
    return true;
}

bool check_optimality(const FlowNetwork& network, const std::vector<Units>& values) {
    struct Residual {
        int from, to;
        Units cost;
    };
    std::vector<Residual> residual;
    auto add = [&](int u, int v, Units lower, Units upper, Units cost, Units f) {
        if (f < upper) residual.push_back({u, v, cost});
        if (f > lower) residual.push_back({v, u, -cost});
    };
    for (const auto& e : network.edges()) {
        add(e.from, e.to, e.lower, network.capacity(e), e.cost, values[e.id]);
    }
    add(network.sink(), network.source(), 0, network.big_upper(), 0, flow_value(network, values));

    // Bellman-Ford from a virtual source at distance 0 to every node.
    const int n = network.node_count();
    std::vector<Units> dist(n, 0);
    for (int round = 0; round < n; ++round) {
        bool changed = false;
        for (const auto& r : residual) {
            if (dist[r.from] + r.cost < dist[r.to]) {
                dist[r.to] = dist[r.from] + r.cost;
                changed = true;
            }
        }
        if (!changed) return true;
    }
    return false;
}

std::string describe_infeasibility(const FlowNetwork& network, const Flow& flow) {
    std::string out;
    for (int v : flow.unsaturated) {
        if (!out.empty()) out += ", ";
        out += to_string(network.node(v));
    }
    return out.empty() ? "none" : out;
}

}  // namespace hcap
