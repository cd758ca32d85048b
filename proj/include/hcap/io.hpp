#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "hcap/coordinates.hpp"
#include "hcap/flow_network.hpp"
#include "hcap/layered_graph.hpp"

namespace hcap {

/// Syntax or semantic error in a graph document, with 1-based location.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& message, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }
    const std::string& message() const { return message_; }

  private:
    std::string message_;
    int line_;
    int column_;
};

struct GraphDocument {
    LayeredGraph graph;  // properized
    LayoutOptions options;
};

/// Parses the line-oriented instance format (see docs/formats.md).
/// Long edges are properized with the positions given in the document.
GraphDocument parse_graph(std::string_view text);

/// Canonical document for a graph and its options; parse_graph(emit_graph(g, o))
/// reproduces (g, o).
std::string emit_graph(const LayeredGraph& graph, const LayoutOptions& options = {});

/// JSON layout document: status, metrics and one record per node in layer
/// order. Keys are emitted in a fixed order.
std::string emit_layout(const Layout& layout, const LayeredGraph& graph,
                        std::string_view status = "optimal");

struct SvgStyle {
    int unit = 40;
    int radius = 6;
    int margin = 20;
};

/// SVG 1.1 drawing: circles for real nodes, lines for edges and polylines for
/// dummy chains.
std::string render_svg(const Layout& layout, const LayeredGraph& graph, const SvgStyle& style = {});

}  // namespace hcap
