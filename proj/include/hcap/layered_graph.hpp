#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hcap {

/// Opaque node label. Labels are unique within a graph.
using NodeId = std::string;

/// Dense node index, assigned layer by layer in left-to-right order.
using NodeIndex = int;

struct Edge {
    NodeId source;
    NodeId target;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Layer and 0-based position of a node inside that layer.
struct Slot {
    int layer = -1;
    int pos = -1;

    friend bool operator==(const Slot&, const Slot&) = default;
};

/// A graph edge resolved to layer/position addressing. `layer` is the layer
/// of the source; the target sits in `layer + 1`.
struct ProperEdge {
    int index = -1;  // position in LayeredGraph::edges()
    int layer = -1;
    int src = -1;
    int tgt = -1;
};

/// Chain of dummy nodes that replaced one long edge.
struct DummyChain {
    Edge original;
    std::vector<NodeId> dummies;

    friend bool operator==(const DummyChain&, const DummyChain&) = default;
};

/// A layered directed graph with a fixed left-to-right order in every layer.
///
/// Construction never fails: malformed input is representable so that
/// validate() can describe it. Operations that need a proper graph check
/// validity and throw std::invalid_argument otherwise.
class LayeredGraph {
  public:
    LayeredGraph() = default;
    LayeredGraph(std::vector<std::vector<NodeId>> layers, std::vector<Edge> edges,
                 std::vector<DummyChain> dummy_map = {});

    const std::vector<std::vector<NodeId>>& layers() const { return layers_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<DummyChain>& dummy_map() const { return dummy_map_; }

    int layer_count() const { return static_cast<int>(layers_.size()); }
    int layer_size(int layer) const { return static_cast<int>(layers_[layer].size()); }
    int node_count() const { return static_cast<int>(labels_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    /// Slot of a label, or nullopt for unknown labels. For duplicated labels
    /// the first occurrence wins.
    std::optional<Slot> locate(const NodeId& label) const;
    bool contains(const NodeId& label) const { return locate(label).has_value(); }

    NodeIndex index_at(int layer, int pos) const { return layer_offset_[layer] + pos; }
    NodeIndex index_of(const NodeId& label) const;
    const NodeId& label(NodeIndex v) const { return labels_[v]; }
    Slot slot(NodeIndex v) const { return slots_[v]; }

    bool is_dummy(const NodeId& label) const;

    /// Edges resolved to slots; requires a valid graph.
    const std::vector<ProperEdge>& proper_edges() const;
    /// Proper edges whose source lies in `layer`.
    std::vector<ProperEdge> edges_between(int layer) const;

    int in_degree(int layer, int pos) const;
    int out_degree(int layer, int pos) const;

    /// Proper edges realizing (source, target): the edge itself, or the chain
    /// segments of a subdivided long edge. Empty when neither exists.
    std::vector<Edge> segments_of(const Edge& edge) const;

    /// Dummy-to-dummy segments of every chain.
    std::vector<Edge> inner_segments() const;

    /// Index in edges() of the edge (source, target), if present.
    std::optional<int> find_edge(const NodeId& source, const NodeId& target) const;

    friend bool operator==(const LayeredGraph& a, const LayeredGraph& b) {
        return a.layers_ == b.layers_ && a.edges_ == b.edges_ && a.dummy_map_ == b.dummy_map_;
    }

  private:
    void require_valid() const;

    std::vector<std::vector<NodeId>> layers_;
    std::vector<Edge> edges_;
    std::vector<DummyChain> dummy_map_;

    std::vector<NodeId> labels_;
    std::vector<Slot> slots_;
    std::vector<int> layer_offset_;
    std::map<NodeId, Slot> lookup_;
    bool valid_ = false;
    std::vector<ProperEdge> proper_;
    std::vector<int> in_deg_;
    std::vector<int> out_deg_;
};

enum class ViolationKind {
    NotProper,
    DuplicateNode,
    UnknownEndpoint,
    SameLayerEdge,
    SelfLoop,
    WrongDirection,
    DuplicateEdge,
};

const char* to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string element;  // offending label or "u->v"
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;

    bool has(ViolationKind kind) const;
};

ValidationReport validate(const LayeredGraph& graph);

/// Thrown by properize when a dummy node has no order position.
class ProperizeError : public std::invalid_argument {
  public:
    ProperizeError(const std::string& what, int layer)
        : std::invalid_argument(what), layer_(layer) {}
    int layer() const { return layer_; }

  private:
    int layer_;
};

/// Final order positions of the dummies of one long edge, one entry per
/// intermediate layer (top to bottom). Positions index the properized layer.
using DummyPositions = std::map<Edge, std::vector<int>>;

/// Replaces every edge spanning k > 1 layers by a chain through k - 1 dummy
/// nodes placed at the caller-supplied positions. Dummy labels have the form
/// "source~target@layer".
LayeredGraph properize(const LayeredGraph& graph, const DummyPositions& positions = {});

/// Fixture with k layers: a single top node, k - 2 layers holding (l_i, r_i)
/// and a single bottom node, linked as a -> l_2, r_i -> l_{i+1}, r_{k-1} -> h.
LayeredGraph fig1_family(int k);

struct RandomGraphSpec {
    int layer_count = 1;
    int min_size = 1;
    int max_size = 1;
    double edge_density = 0.5;
    std::uint64_t seed = 0;
};

/// Seeded random proper layered graph. Every consecutive pair of non-empty
/// layers receives at least one edge when edge_density > 0.
LayeredGraph generate_random(const RandomGraphSpec& spec);

}  // namespace hcap
