#include "hcap/layered_graph.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace hcap {

namespace {

std::string edge_name(const Edge& e) { return e.source + "->" + e.target; }

std::string dummy_label(const Edge& e, int layer) {
    return e.source + "~" + e.target + "@" + std::to_string(layer);
}

}  // namespace

LayeredGraph::LayeredGraph(std::vector<std::vector<NodeId>> layers, std::vector<Edge> edges,
                           std::vector<DummyChain> dummy_map)
    : layers_(std::move(layers)), edges_(std::move(edges)), dummy_map_(std::move(dummy_map)) {
    layer_offset_.reserve(layers_.size() + 1);
    for (int i = 0; i < layer_count(); ++i) {
        layer_offset_.push_back(static_cast<int>(labels_.size()));
        for (int p = 0; p < layer_size(i); ++p) {
            labels_.push_back(layers_[i][p]);
            slots_.push_back({i, p});
            lookup_.emplace(layers_[i][p], Slot{i, p});
        }
    }
    layer_offset_.push_back(static_cast<int>(labels_.size()));

    valid_ = validate(*this).ok;
    if (!valid_) return;

    in_deg_.assign(labels_.size(), 0);
    out_deg_.assign(labels_.size(), 0);
    proper_.reserve(edges_.size());
    for (int idx = 0; idx < edge_count(); ++idx) {
        const Slot s = lookup_.at(edges_[idx].source);
        const Slot t = lookup_.at(edges_[idx].target);
        proper_.push_back({idx, s.layer, s.pos, t.pos});
        ++out_deg_[index_at(s.layer, s.pos)];
        ++in_deg_[index_at(t.layer, t.pos)];
    }
}

std::optional<Slot> LayeredGraph::locate(const NodeId& label) const {
    auto it = lookup_.find(label);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
}

NodeIndex LayeredGraph::index_of(const NodeId& label) const {
    auto s = locate(label);
    if (!s) throw std::out_of_range("unknown node '" + label + "'");
    return index_at(s->layer, s->pos);
}

bool LayeredGraph::is_dummy(const NodeId& label) const {
    for (const auto& chain : dummy_map_) {
        if (std::find(chain.dummies.begin(), chain.dummies.end(), label) != chain.dummies.end()) {
            return true;
        }
    }
    return false;
}

void LayeredGraph::require_valid() const {
    if (!valid_) throw std::invalid_argument("graph is not a valid proper layered graph");
}

const std::vector<ProperEdge>& LayeredGraph::proper_edges() const {
    require_valid();
    return proper_;
}

std::vector<ProperEdge> LayeredGraph::edges_between(int layer) const {
    require_valid();
    std::vector<ProperEdge> out;
    for (const auto& e : proper_) {
        if (e.layer == layer) out.push_back(e);
    }
    return out;
}

int LayeredGraph::in_degree(int layer, int pos) const {
    require_valid();
    return in_deg_[index_at(layer, pos)];
}

int LayeredGraph::out_degree(int layer, int pos) const {
    require_valid();
    return out_deg_[index_at(layer, pos)];
}

std::vector<Edge> LayeredGraph::segments_of(const Edge& edge) const {
    if (find_edge(edge.source, edge.target)) return {edge};
    for (const auto& chain : dummy_map_) {
        if (chain.original != edge) continue;
        std::vector<Edge> out;
        NodeId prev = edge.source;
        for (const auto& d : chain.dummies) {
            out.push_back({prev, d});
            prev = d;
        }
        out.push_back({prev, edge.target});
        return out;
    }
    return {};
}

std::vector<Edge> LayeredGraph::inner_segments() const {
    std::vector<Edge> out;
    for (const auto& chain : dummy_map_) {
        for (std::size_t i = 1; i < chain.dummies.size(); ++i) {
            out.push_back({chain.dummies[i - 1], chain.dummies[i]});
        }
    }
    return out;
}

std::optional<int> LayeredGraph::find_edge(const NodeId& source, const NodeId& target) const {
    for (int idx = 0; idx < edge_count(); ++idx) {
        if (edges_[idx].source == source && edges_[idx].target == target) return idx;
    }
    return std::nullopt;
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::NotProper: return "NotProper";
        case ViolationKind::DuplicateNode: return "DuplicateNode";
        case ViolationKind::UnknownEndpoint: return "UnknownEndpoint";
        case ViolationKind::SameLayerEdge: return "SameLayerEdge";
        case ViolationKind::SelfLoop: return "SelfLoop";
        case ViolationKind::WrongDirection: return "WrongDirection";
        case ViolationKind::DuplicateEdge: return "DuplicateEdge";
    }
    return "?";
}

bool ValidationReport::has(ViolationKind kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [kind](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate(const LayeredGraph& graph) {
    ValidationReport report;
    auto add = [&report](ViolationKind kind, std::string element) {
        report.violations.push_back({kind, std::move(element)});
    };

    std::set<NodeId> seen;
    for (const auto& layer : graph.layers()) {
        for (const auto& label : layer) {
            if (!seen.insert(label).second) add(ViolationKind::DuplicateNode, label);
        }
    }

    std::set<Edge> seen_edges;
    for (const auto& e : graph.edges()) {
        const auto name = edge_name(e);
        if (!seen_edges.insert(e).second) add(ViolationKind::DuplicateEdge, name);
        if (e.source == e.target) {
            add(ViolationKind::SelfLoop, name);
            continue;
        }
        const auto s = graph.locate(e.source);
        const auto t = graph.locate(e.target);
        if (!s || !t) {
            add(ViolationKind::UnknownEndpoint, name);
            continue;
        }
        if (s->layer == t->layer) {
            add(ViolationKind::SameLayerEdge, name);
        } else if (t->layer < s->layer) {
            add(ViolationKind::WrongDirection, name);
        } else if (t->layer != s->layer + 1) {
            add(ViolationKind::NotProper, name);
        }
    }

    report.ok = report.violations.empty();
    return report;
}

LayeredGraph properize(const LayeredGraph& graph, const DummyPositions& positions) {
    const auto report = validate(graph);
    for (const auto& v : report.violations) {
        if (v.kind != ViolationKind::NotProper) {
            throw std::invalid_argument(std::string("cannot properize: ") + to_string(v.kind) +
                                        " " + v.element);
        }
    }
    if (report.ok) return graph;

    const int layers = graph.layer_count();
    // (final position, label) requests per layer
    std::vector<std::vector<std::pair<int, NodeId>>> inserts(layers);
    std::vector<Edge> edges;
    std::vector<DummyChain> chains = graph.dummy_map();

    for (const auto& e : graph.edges()) {
        const Slot s = *graph.locate(e.source);
        const Slot t = *graph.locate(e.target);
        if (t.layer == s.layer + 1) {
            edges.push_back(e);
            continue;
        }
        const int span = t.layer - s.layer;
        auto it = positions.find(e);
        const std::vector<int> empty;
        const auto& pos = it == positions.end() ? empty : it->second;
        if (static_cast<int>(pos.size()) < span - 1) {
            const int missing = s.layer + 1 + static_cast<int>(pos.size());
            throw ProperizeError("no order position for dummy of " + edge_name(e) +
                                      " in layer " + std::to_string(missing),
                                  missing);
        }
        DummyChain chain{e, {}};
        NodeId prev = e.source;
        for (int step = 1; step < span; ++step) {
            const int layer = s.layer + step;
            NodeId label = dummy_label(e, layer);
            if (graph.contains(label)) {
                throw std::invalid_argument("dummy label '" + label + "' collides with a node");
            }
            inserts[layer].emplace_back(pos[step - 1], label);
            edges.push_back({prev, label});
            chain.dummies.push_back(label);
            prev = label;
        }
        edges.push_back({prev, e.target});
        chains.push_back(std::move(chain));
    }

    std::vector<std::vector<NodeId>> out(layers);
    for (int i = 0; i < layers; ++i) {
        auto& req = inserts[i];
        const int final_size = graph.layer_size(i) + static_cast<int>(req.size());
        std::vector<std::optional<NodeId>> cells(final_size);
        for (auto& [p, label] : req) {
            if (p < 0 || p >= final_size || cells[p]) {
                throw ProperizeError("invalid order position " + std::to_string(p) +
                                          " for dummy '" + label + "' in layer " +
                                          std::to_string(i),
                                      i);
            }
            cells[p] = label;
        }
        auto orig = graph.layers()[i].begin();
        for (auto& c : cells) {
            if (!c) c = *orig++;
            out[i].push_back(std::move(*c));
        }
    }
    return LayeredGraph(std::move(out), std::move(edges), std::move(chains));
}

LayeredGraph fig1_family(int k) {
    if (k < 4) throw std::invalid_argument("fig1_family needs k >= 4");
    std::vector<std::vector<NodeId>> layers;
    std::vector<Edge> edges;
    layers.push_back({"a"});
    for (int i = 2; i <= k - 1; ++i) {
        layers.push_back({"l" + std::to_string(i), "r" + std::to_string(i)});
    }
    layers.push_back({"h"});
    edges.push_back({"a", "l2"});
    for (int i = 2; i <= k - 2; ++i) {
        edges.push_back({"r" + std::to_string(i), "l" + std::to_string(i + 1)});
    }
    edges.push_back({"r" + std::to_string(k - 1), "h"});
    return LayeredGraph(std::move(layers), std::move(edges));
}

LayeredGraph generate_random(const RandomGraphSpec& spec) {
    if (spec.layer_count < 1 || spec.min_size < 1 || spec.max_size < spec.min_size ||
        spec.edge_density < 0.0 || spec.edge_density > 1.0) {
        throw std::invalid_argument("invalid random graph spec");
    }
    // Raw mt19937_64 output is fully specified, so the corpus is reproducible
    // across standard libraries (the <random> distributions are not).
    std::mt19937_64 rng(spec.seed);
    auto below = [&rng](std::uint64_t n) { return static_cast<int>(rng() % n); };
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::vector<std::vector<NodeId>> layers(spec.layer_count);
    for (int i = 0; i < spec.layer_count; ++i) {
        const int size = spec.min_size + below(spec.max_size - spec.min_size + 1);
        for (int p = 0; p < size; ++p) {
            layers[i].push_back("n" + std::to_string(i) + "_" + std::to_string(p));
        }
    }

    std::vector<Edge> edges;
    for (int i = 0; i + 1 < spec.layer_count; ++i) {
        const auto before = edges.size();
        for (const auto& u : layers[i]) {
            for (const auto& v : layers[i + 1]) {
                if (spec.edge_density >= 1.0 || unit() < spec.edge_density) edges.push_back({u, v});
            }
        }
        if (edges.size() == before && spec.edge_density > 0.0) {
            const auto& u = layers[i][below(layers[i].size())];
            const auto& v = layers[i + 1][below(layers[i + 1].size())];
            edges.push_back({u, v});
        }
    }
    return LayeredGraph(std::move(layers), std::move(edges));
}

}  // namespace hcap
