#include "hcap/io.hpp"

#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hcap {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         message),
      message_(message),
      line_(line),
      column_(column) {}

namespace {

constexpr std::string_view kHeader = "hcap-graph";

struct Token {
    std::string text;
    int line;
    int column;
};

using Line = std::vector<Token>;

std::vector<Line> tokenize(std::string_view text) {
    std::vector<Line> lines;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        std::string_view raw = text.substr(start, end - start);
        ++line_no;
        Line tokens;
        std::size_t i = 0;
        while (i < raw.size()) {
            if (raw[i] == ' ' || raw[i] == '\t' || raw[i] == '\r') {
                ++i;
                continue;
            }
            if (raw[i] == '#') break;
            const std::size_t b = i;
            while (i < raw.size() && raw[i] != ' ' && raw[i] != '\t' && raw[i] != '\r') ++i;
            tokens.push_back({std::string(raw.substr(b, i - b)), line_no, static_cast<int>(b) + 1});
        }
        if (!tokens.empty()) lines.push_back(std::move(tokens));
        if (end == text.size()) break;
        start = end + 1;
    }
    return lines;
}

[[noreturn]] void fail(const Token& at, const std::string& message) {
    throw ParseError(message, at.line, at.column);
}

Units parse_int(const Token& t) {
    Units value = 0;
    const auto* first = t.text.data();
    const auto* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) fail(t, "expected an integer, got '" + t.text + "'");
    return value;
}

bool valid_label(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '_' || c == '.' || c == '-';
        if (!ok) return false;
    }
    return true;
}

void expect_args(const Line& line, std::size_t min, std::size_t max, const char* usage) {
    if (line.size() - 1 < min || line.size() - 1 > max) {
        fail(line.front(), std::string("expected: ") + usage);
    }
}

struct EdgeDecl {
    Edge edge;
    std::vector<int> positions;
    bool is_long = false;
    Line tokens;
};

}  // namespace

GraphDocument parse_graph(std::string_view text) {
    const auto lines = tokenize(text);
    if (lines.empty()) throw ParseError("empty document; expected 'hcap-graph 1'", 1, 1);
    const Line& header = lines.front();
    if (header.size() != 2 || header[0].text != kHeader) fail(header[0], "expected 'hcap-graph 1'");
    if (parse_int(header[1]) != 1) fail(header[1], "unsupported format version " + header[1].text);

    std::vector<std::vector<NodeId>> layers;
    std::map<NodeId, int> layer_of;
    std::vector<EdgeDecl> decls;
    std::vector<Line> min_lines, max_lines, vertical_lines;
    LayoutOptions options;
    std::optional<Token> cap_token;

    for (std::size_t n = 1; n < lines.size(); ++n) {
        const Line& line = lines[n];
        const std::string& kw = line.front().text;
        if (kw == "layer") {
            std::vector<NodeId> layer;
            for (std::size_t i = 1; i < line.size(); ++i) {
                const Token& t = line[i];
                if (!valid_label(t.text)) fail(t, "invalid node label '" + t.text + "'");
                if (!layer_of.emplace(t.text, static_cast<int>(layers.size())).second) {
                    fail(t, "duplicate node label '" + t.text + "'");
                }
                layer.push_back(t.text);
            }
            layers.push_back(std::move(layer));
        } else if (kw == "edge" || kw == "long") {
            const bool is_long = kw == "long";
            if (is_long) {
                if (line.size() < 4) fail(line.front(), "expected: long <source> <target> <position>...");
            } else {
                expect_args(line, 2, 2, "edge <source> <target>");
            }
            EdgeDecl d{{line[1].text, line[2].text}, {}, is_long, line};
            for (std::size_t i = 3; i < line.size(); ++i) {
                const Units p = parse_int(line[i]);
                if (p < 0) fail(line[i], "negative order position");
                d.positions.push_back(static_cast<int>(p));
            }
            decls.push_back(std::move(d));
        } else if (kw == "width_cap") {
            expect_args(line, 1, 1, "width_cap <W>");
            options.width_cap = parse_int(line[1]);
            if (*options.width_cap < 0) fail(line[1], "width cap must be non-negative");
            cap_token = line[1];
        } else if (kw == "min_dist") {
            expect_args(line, 3, 3, "min_dist <layer> <gap> <value>");
            min_lines.push_back(line);
        } else if (kw == "max_dist") {
            expect_args(line, 3, 3, "max_dist <layer> <gap> <value>");
            max_lines.push_back(line);
        } else if (kw == "vertical") {
            expect_args(line, 2, 2, "vertical <source> <target>");
            vertical_lines.push_back(line);
        } else if (kw == "normalize") {
            expect_args(line, 1, 1, "normalize true|false");
            if (line[1].text == "true") options.normalize = true;
            else if (line[1].text == "false") options.normalize = false;
            else fail(line[1], "expected true or false");
        } else {
            fail(line.front(), "unknown directive '" + kw + "'");
        }
    }

    std::set<Edge> seen;
    std::vector<Edge> edges;
    DummyPositions positions;
    for (const auto& d : decls) {
        for (int end = 1; end <= 2; ++end) {
            if (!layer_of.count(d.tokens[end].text)) {
                fail(d.tokens[end], "unknown node '" + d.tokens[end].text + "'");
            }
        }
        const int span = layer_of[d.edge.target] - layer_of[d.edge.source];
        const std::string name = d.edge.source + "->" + d.edge.target;
        if (d.edge.source == d.edge.target) fail(d.tokens[1], "self-loop " + name);
        if (span <= 0) fail(d.tokens[2], "edge " + name + " does not point to a later layer");
        if (!d.is_long && span != 1) {
            fail(d.tokens[0], "edge " + name + " spans " + std::to_string(span) +
                                  " layers; declare it with 'long' and dummy positions");
        }
        if (d.is_long) {
            if (span < 2) fail(d.tokens[0], "long edge " + name + " connects consecutive layers");
            if (static_cast<int>(d.positions.size()) != span - 1) {
                fail(d.tokens[0], "long edge " + name + " needs " + std::to_string(span - 1) +
                                      " dummy positions, got " + std::to_string(d.positions.size()));
            }
            positions[d.edge] = d.positions;
        }
        if (!seen.insert(d.edge).second) fail(d.tokens[0], "duplicate edge " + name);
        edges.push_back(d.edge);
    }

    LayeredGraph raw(std::move(layers), std::move(edges));
    GraphDocument doc;
    try {
        doc.graph = properize(raw, positions);
    } catch (const ProperizeError& e) {
        for (const auto& d : decls) {
            if (!d.is_long) continue;
            const int top = layer_of[d.edge.source];
            if (e.layer() > top && e.layer() < layer_of[d.edge.target]) fail(d.tokens[0], e.what());
        }
        throw ParseError(e.what(), lines.front().front().line, 1);
    }
    const LayeredGraph& g = doc.graph;

    auto gap_key = [&](const Line& line) {
        const Units layer = parse_int(line[1]);
        const Units gap = parse_int(line[2]);
        if (layer < 0 || layer >= g.layer_count()) fail(line[1], "layer out of range");
        if (gap < 1 || gap >= g.layer_size(static_cast<int>(layer))) {
            fail(line[2], "gap must be interior (1.." + std::to_string(g.layer_size(static_cast<int>(layer)) - 1) + ")");
        }
        return std::pair<int, int>(static_cast<int>(layer), static_cast<int>(gap));
    };
    for (const auto& line : min_lines) {
        const auto key = gap_key(line);
        const Units v = parse_int(line[3]);
        if (v < 1) fail(line[3], "min_dist must be at least 1");
        options.min_dist[key] = v;
    }
    for (const auto& line : max_lines) {
        const auto key = gap_key(line);
        const Units v = parse_int(line[3]);
        if (v < options.min_gap(key.first, key.second)) fail(line[3], "max_dist below min_dist");
        options.max_dist[key] = v;
    }
    for (const auto& line : vertical_lines) {
        const Edge e{line[1].text, line[2].text};
        const auto segments = g.segments_of(e);
        if (segments.empty()) fail(line[0], "vertical edge " + e.source + "->" + e.target + " is not an edge");
        options.vertical_edges.insert(options.vertical_edges.end(), segments.begin(), segments.end());
    }
    doc.options = std::move(options);
    return doc;
}

std::string emit_graph(const LayeredGraph& graph, const LayoutOptions& options) {
    std::ostringstream out;
    out << kHeader << " 1\n";
    for (const auto& layer : graph.layers()) {
        out << "layer";
        for (const auto& label : layer) {
            if (!graph.is_dummy(label)) out << ' ' << label;
        }
        out << '\n';
    }

    std::map<Edge, const DummyChain*> chain_start;
    std::set<Edge> chain_edges;
    for (const auto& chain : graph.dummy_map()) {
        NodeId prev = chain.original.source;
        for (const auto& d : chain.dummies) {
            chain_edges.insert({prev, d});
            prev = d;
        }
        chain_edges.insert({prev, chain.original.target});
        chain_start[{chain.original.source, chain.dummies.front()}] = &chain;
    }
    for (const auto& e : graph.edges()) {
        if (auto it = chain_start.find(e); it != chain_start.end()) {
            const DummyChain& chain = *it->second;
            out << "long " << chain.original.source << ' ' << chain.original.target;
            for (const auto& d : chain.dummies) out << ' ' << graph.locate(d)->pos;
            out << '\n';
        } else if (!chain_edges.count(e)) {
            out << "edge " << e.source << ' ' << e.target << '\n';
        }
    }

    if (options.width_cap) out << "width_cap " << *options.width_cap << '\n';
    for (const auto& [key, v] : options.min_dist) {
        out << "min_dist " << key.first << ' ' << key.second << ' ' << v << '\n';
    }
    for (const auto& [key, v] : options.max_dist) {
        out << "max_dist " << key.first << ' ' << key.second << ' ' << v << '\n';
    }
    for (const auto& e : options.vertical_edges) out << "vertical " << e.source << ' ' << e.target << '\n';
    if (!options.normalize) out << "normalize false\n";
    return out.str();
}

std::string emit_layout(const Layout& layout, const LayeredGraph& graph, std::string_view status) {
    nlohmann::ordered_json doc;
    doc["format"] = "hcap-layout";
    doc["version"] = 1;
    doc["status"] = std::string(status);
    doc["metrics"] = {{"total_length", layout.metrics.total_length}, {"width", layout.metrics.width}};
    auto nodes = nlohmann::ordered_json::array();
    for (NodeIndex v = 0; v < graph.node_count() && v < static_cast<int>(layout.x.size()); ++v) {
        nlohmann::ordered_json node;
        node["label"] = graph.label(v);
        node["x"] = layout.x[v];
        node["y"] = layout.y[v];
        node["dummy"] = graph.is_dummy(graph.label(v));
        nodes.push_back(std::move(node));
    }
    doc["nodes"] = std::move(nodes);
    return doc.dump(2) + "\n";
}

std::string render_svg(const Layout& layout, const LayeredGraph& graph, const SvgStyle& style) {
    if (static_cast<int>(layout.x.size()) != graph.node_count()) {
        throw std::invalid_argument("render_svg: layout does not cover the graph");
    }
    const Layout drawing = normalized(layout);
    const Units width = drawing.metrics.width;
    const int rows = std::max(graph.layer_count() - 1, 0);
    auto px = [&](NodeIndex v) { return style.margin + drawing.x[v] * style.unit; };
    auto py = [&](NodeIndex v) { return style.margin + static_cast<Units>(drawing.y[v]) * style.unit; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << 2 * style.margin + width * style.unit << "\" height=\"" << 2 * style.margin + rows * style.unit
        << "\">\n";
    out << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";

    std::set<Edge> in_chain;
    for (const auto& chain : graph.dummy_map()) {
        std::vector<NodeId> path{chain.original.source};
        path.insert(path.end(), chain.dummies.begin(), chain.dummies.end());
        path.push_back(chain.original.target);
        out << "<polyline points=\"";
        for (std::size_t i = 0; i < path.size(); ++i) {
            const NodeIndex v = graph.index_of(path[i]);
            out << (i ? " " : "") << px(v) << ',' << py(v);
            if (i + 1 < path.size()) in_chain.insert({path[i], path[i + 1]});
        }
        out << "\"/>\n";
    }
    for (const auto& e : graph.edges()) {
        if (in_chain.count(e)) continue;
        const NodeIndex u = graph.index_of(e.source);
        const NodeIndex v = graph.index_of(e.target);
        out << "<line x1=\"" << px(u) << "\" y1=\"" << py(u) << "\" x2=\"" << px(v) << "\" y2=\"" << py(v)
            << "\"/>\n";
    }
    out << "</g>\n<g stroke=\"black\" stroke-width=\"1\" fill=\"white\">\n";
    for (NodeIndex v = 0; v < graph.node_count(); ++v) {
        if (graph.is_dummy(graph.label(v))) continue;
        out << "<circle cx=\"" << px(v) << "\" cy=\"" << py(v) << "\" r=\"" << style.radius << "\"><title>"
            << graph.label(v) << "</title></circle>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace hcap
