#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hcap/layered_graph.hpp"

namespace hcap {

using Units = std::int64_t;

/// Network node roles. W and Z nodes sit in the gaps of a layer: gap j lies
/// left of the node at 0-based position j, so gap 0 and gap |L_i| are the
/// left and right margins.
enum class NetNodeKind { W, Z, Source, Sink, WidthGate };

struct NetNode {
    NetNodeKind kind;
    int layer = -1;
    int gap = -1;

    friend bool operator==(const NetNode&, const NetNode&) = default;
};

std::string to_string(const NetNode& node);

enum class ArcKind { A, BWRight, BWLeft, BZRight, BZLeft, C, SourceArc, SinkArc, GateArc };

const char* to_string(ArcKind kind);

/// A network edge. Meaning of (layer, j, k) by kind:
///   A:          gap j of `layer`
///   B*:         arc over the node at position j of `layer`
///               (between gaps j and j + 1)
///   C:          z^layer_j -> w^{layer+1}_k
///   SourceArc:  into w^0_j; SinkArc: out of z^last_j
struct NetEdge {
    int id = -1;
    int from = -1;
    int to = -1;
    Units lower = 0;
    std::optional<Units> upper;  // nullopt means unbounded
    Units cost = 0;
    ArcKind kind = ArcKind::A;
    int layer = -1;
    int j = -1;
    int k = -1;
};

/// Per-gap distance bound keyed by (layer, interior gap).
using GapMap = std::map<std::pair<int, int>, Units>;

struct LayoutOptions {
    std::optional<Units> width_cap;
    GapMap min_dist;  // default 1
    GapMap max_dist;  // default unbounded
    std::vector<Edge> vertical_edges;
    bool normalize = true;

    Units min_gap(int layer, int gap) const;
    std::optional<Units> max_gap(int layer, int gap) const;
};

/// The auxiliary min-cost-flow network of a layered graph. Immutable once
/// built; node and edge ids are indices into nodes() and edges().
class FlowNetwork {
  public:
    const std::vector<NetNode>& nodes() const { return nodes_; }
    const std::vector<NetEdge>& edges() const { return edges_; }
    const NetNode& node(int id) const { return nodes_[id]; }
    const NetEdge& edge(int id) const { return edges_[id]; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    int w(int layer, int gap) const { return w_offset_[layer] + gap; }
    int z(int layer, int gap) const { return z_offset_[layer] + gap; }
    int source() const { return source_; }
    int sink() const { return sink_; }
    /// s' when the width is capped, otherwise nullopt.
    std::optional<int> width_gate() const { return gate_; }

    /// Finite stand-in for unbounded capacities.
    Units big_upper() const { return big_upper_; }
    Units capacity(const NetEdge& e) const { return e.upper.value_or(big_upper_); }

    const std::vector<int>& layer_sizes() const { return layer_sizes_; }
    int layer_count() const { return static_cast<int>(layer_sizes_.size()); }

    /// Id of the A-edge of gap (layer, gap).
    int a_edge(int layer, int gap) const { return a_edge_[w(layer, gap)]; }

    std::optional<int> find(ArcKind kind, int layer, int j, int k = -1) const;
    std::vector<int> edges_of_kind(ArcKind kind) const;

    struct BoundOverride {
        int edge = -1;
        Units lower = 0;
        std::optional<Units> upper;
    };
    /// Copy with edge bounds replaced; used to pin flows.
    FlowNetwork with_bounds(const std::vector<BoundOverride>& changes) const;
    FlowNetwork with_big_upper(Units big_upper) const;
    /// Copy without the listed edges; remaining edges are renumbered in order.
    FlowNetwork without_edges(const std::set<int>& ids) const;

    /// Network from explicit parts, for generic flow problems. Edge ids are
    /// reassigned to indices; graph-specific lookups (w, z, a_edge) are not
    /// available.
    static FlowNetwork from_parts(std::vector<NetNode> nodes, std::vector<NetEdge> edges, int source,
                                  int sink, Units big_upper);

  private:
    friend FlowNetwork build_network(const LayeredGraph&, const LayoutOptions&);

    int add_node(NetNode n);
    int add_edge(NetEdge e);
    void reindex();

    std::vector<NetNode> nodes_;
    std::vector<NetEdge> edges_;
    std::vector<int> w_offset_;
    std::vector<int> z_offset_;
    std::vector<int> a_edge_;
    std::vector<int> layer_sizes_;
    int source_ = -1;
    int sink_ = -1;
    std::optional<int> gate_;
    Units big_upper_ = 0;
};

/// Gap pairs (j, k) between `layer` and `layer + 1` that satisfy the hug
/// condition. The boundary pairs (0, 0) and (|L_i|, |L_{i+1}|) are not
/// reported.
std::set<std::pair<int, int>> detect_hugs(const LayeredGraph& graph, int layer);

/// Number of edges between `layer` and `layer + 1` that the C-edge
/// z^layer_j -> w^{layer+1}_k passes over. Zero for the boundary pairs.
Units compute_c_cost(const LayeredGraph& graph, int layer, int j, int k);

struct CrossingSets {
    std::vector<int> right;  // network edges passing over e from left to right
    std::vector<int> left;   // ... from right to left
};

/// Network edges that pass over graph edge `edge_index` (index into
/// graph.edges()).
CrossingSets crossing_sets(const LayeredGraph& graph, const FlowNetwork& network, int edge_index);

/// Removes every network edge that passes over the given graph edge, forcing
/// it to be drawn vertically.
FlowNetwork enforce_vertical(const FlowNetwork& network, const LayeredGraph& graph,
                             const Edge& edge);

/// Builds the network for a valid graph. Throws std::invalid_argument for
/// invalid graphs or conflicting options.
FlowNetwork build_network(const LayeredGraph& graph, const LayoutOptions& options = {});

}  // namespace hcap
