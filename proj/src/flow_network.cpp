#include "hcap/flow_network.hpp"

#include <algorithm>
#include <stdexcept>

namespace hcap {

std::string to_string(const NetNode& node) {
    switch (node.kind) {
        case NetNodeKind::W: return "w(" + std::to_string(node.layer) + "," + std::to_string(node.gap) + ")";
        case NetNodeKind::Z: return "z(" + std::to_string(node.layer) + "," + std::to_string(node.gap) + ")";
        case NetNodeKind::Source: return "s";
        case NetNodeKind::Sink: return "t";
        case NetNodeKind::WidthGate: return "s'";
    }
    return "?";
}

const char* to_string(ArcKind kind) {
    switch (kind) {
        case ArcKind::A: return "A";
        case ArcKind::BWRight: return "BW_right";
        case ArcKind::BWLeft: return "BW_left";
        case ArcKind::BZRight: return "BZ_right";
        case ArcKind::BZLeft: return "BZ_left";
        case ArcKind::C: return "C";
        case ArcKind::SourceArc: return "source";
        case ArcKind::SinkArc: return "sink";
        case ArcKind::GateArc: return "gate";
    }
    return "?";
}

Units LayoutOptions::min_gap(int layer, int gap) const {
    auto it = min_dist.find({layer, gap});
    return it == min_dist.end() ? 1 : it->second;
}

std::optional<Units> LayoutOptions::max_gap(int layer, int gap) const {
    auto it = max_dist.find({layer, gap});
    if (it == max_dist.end()) return std::nullopt;
    return it->second;
}

int FlowNetwork::add_node(NetNode n) {
    nodes_.push_back(n);
    return node_count() - 1;
}

int FlowNetwork::add_edge(NetEdge e) {
    e.id = edge_count();
    edges_.push_back(e);
    return e.id;
}

void FlowNetwork::reindex() {
    a_edge_.assign(nodes_.size(), -1);
    for (auto& e : edges_) {
        if (e.kind == ArcKind::A) a_edge_[e.from] = e.id;
    }
}

FlowNetwork FlowNetwork::from_parts(std::vector<NetNode> nodes, std::vector<NetEdge> edges, int source,
                                    int sink, Units big_upper) {
    FlowNetwork net;
    net.nodes_ = std::move(nodes);
    for (auto& e : edges) {
        if (e.from < 0 || e.to < 0 || e.from >= net.node_count() || e.to >= net.node_count()) {
            throw std::invalid_argument("from_parts: edge endpoint out of range");
        }
        net.add_edge(e);
    }
    net.source_ = source;
    net.sink_ = sink;
    net.big_upper_ = big_upper;
    net.reindex();
    return net;
}

std::optional<int> FlowNetwork::find(ArcKind kind, int layer, int j, int k) const {
    for (const auto& e : edges_) {
        if (e.kind == kind && e.layer == layer && e.j == j && e.k == k) return e.id;
    }
    return std::nullopt;
}

std::vector<int> FlowNetwork::edges_of_kind(ArcKind kind) const {
    std::vector<int> out;
    for (const auto& e : edges_) {
        if (e.kind == kind) out.push_back(e.id);
    }
    return out;
}

FlowNetwork FlowNetwork::with_bounds(const std::vector<BoundOverride>& changes) const {
    FlowNetwork copy = *this;
    for (const auto& c : changes) {
        if (c.upper && *c.upper < c.lower) throw std::invalid_argument("upper bound below lower bound");
        copy.edges_.at(c.edge).lower = c.lower;
        copy.edges_.at(c.edge).upper = c.upper;
    }
    return copy;
}

FlowNetwork FlowNetwork::with_big_upper(Units big_upper) const {
    FlowNetwork copy = *this;
    copy.big_upper_ = big_upper;
    return copy;
}

FlowNetwork FlowNetwork::without_edges(const std::set<int>& ids) const {
    FlowNetwork copy = *this;
    copy.edges_.clear();
    for (const auto& e : edges_) {
        if (ids.count(e.id) == 0) copy.add_edge(e);
    }
    copy.reindex();
    return copy;
}

std::set<std::pair<int, int>> detect_hugs(const LayeredGraph& graph, int layer) {
    if (layer < 0 || layer + 1 >= graph.layer_count()) {
        throw std::out_of_range("detect_hugs: layer has no successor");
    }
    const int upper = graph.layer_size(layer);
    const int lower = graph.layer_size(layer + 1);
    constexpr int none = -1;

    // Per node: extreme neighbour positions across the layer gap.
    std::vector<int> min_tgt(upper, none), max_tgt(upper, none);
    std::vector<int> min_src(lower, none), max_src(lower, none);
    for (const auto& e : graph.edges_between(layer)) {
        min_tgt[e.src] = min_tgt[e.src] == none ? e.tgt : std::min(min_tgt[e.src], e.tgt);
        max_tgt[e.src] = std::max(max_tgt[e.src], e.tgt);
        min_src[e.tgt] = min_src[e.tgt] == none ? e.src : std::min(min_src[e.tgt], e.src);
        max_src[e.tgt] = std::max(max_src[e.tgt], e.src);
    }
    // next_out[p]: first position > p with an outgoing edge.
    std::vector<int> next_out(upper, none), next_in(lower, none);
    for (int p = upper - 2; p >= 0; --p) next_out[p] = max_tgt[p + 1] != none ? p + 1 : next_out[p + 1];
    for (int q = lower - 2; q >= 0; --q) next_in[q] = max_src[q + 1] != none ? q + 1 : next_in[q + 1];

    // With u = start(e1), u' = start(e2), v = target(e3), v' = target(e4) the
    // hug inequalities split into four independent existence tests.
    std::set<std::pair<int, int>> hugs;
    for (int u = 0; u < upper; ++u) {
        if (max_tgt[u] == none || next_out[u] == none) continue;
        const int u2 = next_out[u];
        for (int v = 0; v < lower; ++v) {
            if (max_src[v] == none || next_in[v] == none) continue;
            const int v2 = next_in[v];
            if (min_tgt[u] <= v && max_tgt[u2] >= v2 && min_src[v] <= u && max_src[v2] >= u2) {
                hugs.emplace(u + 1, v + 1);
            }
        }
    }
    return hugs;
}

Units compute_c_cost(const LayeredGraph& graph, int layer, int j, int k) {
    const int upper = graph.layer_size(layer);
    const int lower = graph.layer_size(layer + 1);
    if ((j == 0 && k == 0) || (j == upper && k == lower)) return 0;

    // 1-based positions: v^i_j is the node left of gap j.
    const auto edges = graph.edges_between(layer);
    int j_next = upper + 1;
    int k_next = lower + 1;
    for (const auto& e : edges) {
        if (e.src + 1 > j) j_next = std::min(j_next, e.src + 1);
        if (e.tgt + 1 > k) k_next = std::min(k_next, e.tgt + 1);
    }
    Units cost = 0;
    for (const auto& e : edges) {
        const int p = e.src + 1;
        const int q = e.tgt + 1;
        if ((p <= j && q >= k_next) || (p >= j_next && q <= k)) ++cost;
    }
    return cost;
}

namespace {

// Extended order between a gap node and a graph node at `pos` in the same
// layer: gap g lies left of the node iff g <= pos.
bool gap_left_of(int gap, int pos) { return gap <= pos; }
bool gap_right_of(int gap, int pos) { return gap > pos; }

}  // namespace

CrossingSets crossing_sets(const LayeredGraph& graph, const FlowNetwork& network, int edge_index) {
    const auto& pe = graph.proper_edges().at(edge_index);
    const int top = pe.layer;
    const int bottom = pe.layer + 1;
    CrossingSets sets;
    for (const auto& e : network.edges()) {
        const NetNode& from = network.node(e.from);
        const NetNode& to = network.node(e.to);
        switch (e.kind) {
            case ArcKind::BWRight:
            case ArcKind::BWLeft:
                if (from.layer != bottom) break;
                if (gap_left_of(from.gap, pe.tgt) && gap_right_of(to.gap, pe.tgt)) sets.right.push_back(e.id);
                if (gap_right_of(from.gap, pe.tgt) && gap_left_of(to.gap, pe.tgt)) sets.left.push_back(e.id);
                break;
            case ArcKind::BZRight:
            case ArcKind::BZLeft:
                if (from.layer != top) break;
                if (gap_left_of(from.gap, pe.src) && gap_right_of(to.gap, pe.src)) sets.right.push_back(e.id);
                if (gap_right_of(from.gap, pe.src) && gap_left_of(to.gap, pe.src)) sets.left.push_back(e.id);
                break;
            case ArcKind::C:
                if (from.layer != top) break;
                if (gap_left_of(from.gap, pe.src) && gap_right_of(to.gap, pe.tgt)) sets.right.push_back(e.id);
                if (gap_right_of(from.gap, pe.src) && gap_left_of(to.gap, pe.tgt)) sets.left.push_back(e.id);
                break;
            default:
                break;
        }
    }
    return sets;
}

FlowNetwork enforce_vertical(const FlowNetwork& network, const LayeredGraph& graph,
                             const Edge& edge) {
    auto idx = graph.find_edge(edge.source, edge.target);
    if (!idx) {
        throw std::invalid_argument("vertical edge " + edge.source + "->" + edge.target +
                                    " is not an edge of the graph");
    }
    const auto sets = crossing_sets(graph, network, *idx);
    std::set<int> drop(sets.right.begin(), sets.right.end());
    drop.insert(sets.left.begin(), sets.left.end());
    return network.without_edges(drop);
}

FlowNetwork build_network(const LayeredGraph& graph, const LayoutOptions& options) {
    if (!validate(graph).ok) throw std::invalid_argument("build_network: invalid layered graph");
    const int layers = graph.layer_count();
    if (layers == 0) throw std::invalid_argument("build_network: graph has no layers");

    auto check_gap = [&](const char* what, const std::pair<int, int>& key) {
        const auto [layer, gap] = key;
        if (layer < 0 || layer >= layers || gap < 1 || gap >= graph.layer_size(layer)) {
            throw std::invalid_argument(std::string(what) + " refers to a non-interior gap (" +
                                        std::to_string(layer) + "," + std::to_string(gap) + ")");
        }
    };
    for (const auto& [key, value] : options.min_dist) {
        check_gap("min_dist", key);
        if (value < 1) throw std::invalid_argument("min_dist must be at least 1");
    }
    for (const auto& [key, value] : options.max_dist) {
        check_gap("max_dist", key);
        if (value < options.min_gap(key.first, key.second)) {
            throw std::invalid_argument("max_dist below min_dist at (" + std::to_string(key.first) +
                                        "," + std::to_string(key.second) + ")");
        }
    }
    if (options.width_cap && *options.width_cap < 0) {
        throw std::invalid_argument("width cap must be non-negative");
    }

    FlowNetwork net;
    for (int i = 0; i < layers; ++i) {
        const int n = graph.layer_size(i);
        net.layer_sizes_.push_back(n);
        net.w_offset_.push_back(net.node_count());
        for (int g = 0; g <= n; ++g) net.add_node({NetNodeKind::W, i, g});
        net.z_offset_.push_back(net.node_count());
        for (int g = 0; g <= n; ++g) net.add_node({NetNodeKind::Z, i, g});
    }
    net.source_ = net.add_node({NetNodeKind::Source});
    net.sink_ = net.add_node({NetNodeKind::Sink});
    if (options.width_cap) net.gate_ = net.add_node({NetNodeKind::WidthGate});

    Units min_total = 0;
    for (int i = 0; i < layers; ++i) {
        const int n = graph.layer_size(i);
        for (int g = 0; g <= n; ++g) {
            NetEdge a{.from = net.w(i, g), .to = net.z(i, g), .lower = 1, .kind = ArcKind::A,
                      .layer = i, .j = g};
            if (g > 0 && g < n) {
                a.lower = options.min_gap(i, g);
                a.upper = options.max_gap(i, g);
            }
            min_total += a.lower;
            net.add_edge(a);
        }
    }

    for (int i = 0; i < layers; ++i) {
        for (int p = 0; p < graph.layer_size(i); ++p) {
            const Units in = graph.in_degree(i, p);
            const Units out = graph.out_degree(i, p);
            net.add_edge({.from = net.w(i, p), .to = net.w(i, p + 1), .cost = in,
                          .kind = ArcKind::BWRight, .layer = i, .j = p});
            net.add_edge({.from = net.w(i, p + 1), .to = net.w(i, p), .cost = in,
                          .kind = ArcKind::BWLeft, .layer = i, .j = p});
            net.add_edge({.from = net.z(i, p), .to = net.z(i, p + 1), .cost = out,
                          .kind = ArcKind::BZRight, .layer = i, .j = p});
            net.add_edge({.from = net.z(i, p + 1), .to = net.z(i, p), .cost = out,
                          .kind = ArcKind::BZLeft, .layer = i, .j = p});
        }
    }

    for (int i = 0; i + 1 < layers; ++i) {
        std::vector<std::pair<int, int>> pairs{{0, 0}};
        const auto hugs = detect_hugs(graph, i);
        pairs.insert(pairs.end(), hugs.begin(), hugs.end());
        pairs.emplace_back(graph.layer_size(i), graph.layer_size(i + 1));
        for (const auto& [j, k] : pairs) {
            net.add_edge({.from = net.z(i, j), .to = net.w(i + 1, k),
                          .cost = compute_c_cost(graph, i, j, k), .kind = ArcKind::C,
                          .layer = i, .j = j, .k = k});
        }
    }

    const int root = net.gate_ ? *net.gate_ : net.source_;
    for (int g = 0; g <= graph.layer_size(0); ++g) {
        net.add_edge({.from = root, .to = net.w(0, g), .kind = ArcKind::SourceArc, .layer = 0, .j = g});
    }
    const int last = layers - 1;
    for (int g = 0; g <= graph.layer_size(last); ++g) {
        net.add_edge({.from = net.z(last, g), .to = net.sink_, .kind = ArcKind::SinkArc,
                      .layer = last, .j = g});
    }
    if (net.gate_) {
        net.add_edge({.from = net.source_, .to = *net.gate_, .lower = 0,
                      .upper = *options.width_cap + 2, .kind = ArcKind::GateArc});
        net.big_upper_ = *options.width_cap + 2;
    } else {
        net.big_upper_ = 2 + graph.node_count() + min_total;  // min_total covers every gap
    }
    net.reindex();

    for (const auto& e : options.vertical_edges) net = enforce_vertical(net, graph, e);
    return net;
}

}  // namespace hcap
