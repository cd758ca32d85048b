#include "hcap/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "hcap/coordinates.hpp"
#include "hcap/io.hpp"
#include "hcap/oracle.hpp"
#include "hcap/pipeline.hpp"

namespace hcap::cli {

namespace {

using json = nlohmann::ordered_json;

/// Input problems (bad flags, unreadable files, malformed documents).
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
    std::ostringstream buffer;
    if (path == "-") {
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t pos = s.find(sep); pos != std::string::npos; pos = s.find(sep, start)) {
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    parts.push_back(s.substr(start));
    return parts;
}

Units to_units(const std::string& s, const std::string& flag) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError(flag + ": expected an integer, got '" + s + "'");
    }
}

/// Constraint flags shared by layout and verify.
struct ConstraintFlags {
    std::optional<Units> max_width;
    std::vector<std::string> min_dist;
    std::vector<std::string> max_dist;
    std::vector<std::string> vertical;
    bool straight_inner = false;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--max-width", max_width, "Maximum drawing width");
        cmd->add_option("--min-dist", min_dist, "Minimum gap distance LAYER:GAP:VALUE")->take_all();
        cmd->add_option("--max-dist", max_dist, "Maximum gap distance LAYER:GAP:VALUE")->take_all();
        cmd->add_option("--vertical", vertical, "Draw edge SOURCE:TARGET vertically")->take_all();
        cmd->add_flag("--straight-inner-segments", straight_inner,
                      "Draw dummy-to-dummy segments of long edges vertically");
    }

    void apply(const LayeredGraph& graph, LayoutOptions& options) const {
        if (max_width) options.width_cap = *max_width;
        auto gap_entry = [&](const std::string& spec, const char* flag) {
            const auto parts = split(spec, ':');
            if (parts.size() != 3) throw InputError(std::string(flag) + ": expected LAYER:GAP:VALUE");
            const Units layer = to_units(parts[0], flag);
            const Units gap = to_units(parts[1], flag);
            if (layer < 0 || layer >= graph.layer_count() || gap < 1 ||
                gap >= graph.layer_size(static_cast<int>(layer))) {
                throw InputError(std::string(flag) + ": " + spec + " is not an interior gap");
            }
            return std::pair{std::pair<int, int>(static_cast<int>(layer), static_cast<int>(gap)),
                             to_units(parts[2], flag)};
        };
        for (const auto& s : min_dist) {
            auto [key, v] = gap_entry(s, "--min-dist");
            options.min_dist[key] = v;
        }
        for (const auto& s : max_dist) {
            auto [key, v] = gap_entry(s, "--max-dist");
            options.max_dist[key] = v;
        }
        for (const auto& s : vertical) {
            const auto parts = split(s, ':');
            if (parts.size() != 2) throw InputError("--vertical: expected SOURCE:TARGET");
            const auto segments = graph.segments_of({parts[0], parts[1]});
            if (segments.empty()) throw InputError("--vertical: " + s + " is not an edge");
            options.vertical_edges.insert(options.vertical_edges.end(), segments.begin(), segments.end());
        }
        if (straight_inner) {
            const auto inner = graph.inner_segments();
            options.vertical_edges.insert(options.vertical_edges.end(), inner.begin(), inner.end());
        }
    }
};

GraphDocument load(const std::string& path, const ConstraintFlags* flags) {
    GraphDocument doc;
    try {
        doc = parse_graph(read_input(path));
    } catch (const ParseError& e) {
        throw InputError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                         e.message());
    }
    if (flags) flags->apply(doc.graph, doc.options);
    return doc;
}

json metrics_json(const LayoutMetrics& m) { return {{"total_length", m.total_length}, {"width", m.width}}; }

json overhead_json(const OverheadStats& s) {
    return {{"relative_count", s.relative_count}, {"relative_mean", s.relative_mean},
            {"relative_p95", s.relative_p95},     {"absolute_count", s.absolute_count},
            {"absolute_mean", s.absolute_mean},   {"absolute_max", s.absolute_max}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coordinate assignment for layered drawings by minimum-cost flow", "hcap"};
    app.require_subcommand(1);

    std::string input;
    ConstraintFlags layout_flags;
    std::string svg_path;
    std::string output_path;
    auto* layout_cmd = app.add_subcommand("layout", "Compute x-coordinates of minimum total edge length");
    layout_cmd->add_option("input", input, "Graph document ('-' for stdin)")->required();
    layout_flags.add_to(layout_cmd);
    layout_cmd->add_option("--svg", svg_path, "Also write an SVG drawing");
    layout_cmd->add_option("-o,--output", output_path, "Write the layout document here instead of stdout");

    ConstraintFlags verify_flags;
    auto* verify_cmd = app.add_subcommand("verify", "Solve and check the flow/drawing identities");
    verify_cmd->add_option("input", input, "Graph document ('-' for stdin)")->required();
    verify_flags.add_to(verify_cmd);

    std::optional<Units> oracle_width;
    std::uint64_t budget = default_oracle_budget();
    auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive optimum for small instances");
    oracle_cmd->add_option("input", input, "Graph document ('-' for stdin)")->required();
    oracle_cmd->add_option("--max-width", oracle_width, "Width cap (defaults to the document's)");
    oracle_cmd->add_option("--budget", budget, "Maximum number of enumerated assignments");

    BenchCorpusSpec corpus;
    BenchOptions bench_options;
    bool with_records = false;
    auto* bench_cmd = app.add_subcommand("bench", "Compare unconstrained and minimum-width layouts");
    bench_cmd->add_option("--count", corpus.count, "Number of random instances")->check(CLI::NonNegativeNumber);
    bench_cmd->add_option("--seed", corpus.seed, "Corpus seed");
    bench_cmd->add_option("--min-layers", corpus.min_layers)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--max-layers", corpus.max_layers)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--min-size", corpus.min_layer_size)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--max-size", corpus.max_layer_size)->check(CLI::PositiveNumber);
    bench_cmd->add_option("--density", corpus.edge_density)->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--budget-ms", bench_options.instance_budget_ms, "Per-instance time budget");
    bench_cmd->add_option("--threads", bench_options.threads)->check(CLI::PositiveNumber);
    bench_cmd->add_flag("--records", with_records, "Include per-instance records");

    int fig1_k = 4;
    RandomGraphSpec random_spec{3, 1, 4, 0.5, 1};
    auto* generate_cmd = app.add_subcommand("generate", "Print a graph document");
    generate_cmd->require_subcommand(1);
    auto* fig1_cmd = generate_cmd->add_subcommand("fig1", "Two-column versus staircase fixture");
    fig1_cmd->add_option("k", fig1_k, "Number of layers (>= 4)")->required();
    auto* random_cmd = generate_cmd->add_subcommand("random", "Seeded random proper layered graph");
    random_cmd->add_option("--layers", random_spec.layer_count)->check(CLI::PositiveNumber);
    random_cmd->add_option("--min-size", random_spec.min_size)->check(CLI::PositiveNumber);
    random_cmd->add_option("--max-size", random_spec.max_size)->check(CLI::PositiveNumber);
    random_cmd->add_option("--density", random_spec.edge_density)->check(CLI::Range(0.0, 1.0));
    random_cmd->add_option("--seed", random_spec.seed);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*layout_cmd) {
            GraphDocument doc = load(input, &layout_flags);
            Layout layout = doc.options.width_cap
                                ? layout_prescribed_width(doc.graph, *doc.options.width_cap, doc.options)
                                : layout_min_length(doc.graph, doc.options);
            const std::string text = emit_layout(layout, doc.graph);
            if (output_path.empty()) out << text;
            else write_file(output_path, text);
            if (!svg_path.empty()) write_file(svg_path, render_svg(layout, doc.graph));
            return kOk;
        }
        if (*verify_cmd) {
            GraphDocument doc = load(input, &verify_flags);
            Solution solution = solve_layout(doc.graph, doc.options);
            const auto& values = solution.flow.values;
            const bool feasible = check_feasibility(solution.network, values);
            const bool optimal = check_optimality(solution.network, values);
            const PropertyReport report = verify_properties(doc.graph, solution.network, values, true);
            out << "feasible " << (feasible ? "pass" : "FAIL") << '\n';
            out << "optimal " << (optimal ? "pass" : "FAIL") << '\n';
            for (const PropertyCheck* c : report.all()) {
                out << c->name << ' ' << (!c->checked ? "skipped" : c->passed ? "pass" : "FAIL");
                if (!c->passed) out << " (" << c->witness << ')';
                out << '\n';
            }
            out << "cost " << solution.flow.total_cost << " length " << solution.layout.metrics.total_length
                << " width " << solution.layout.metrics.width << '\n';
            return feasible && optimal && report.ok() ? kOk : kInfeasible;
        }
        if (*oracle_cmd) {
            GraphDocument doc = load(input, nullptr);
            if (oracle_width) doc.options.width_cap = *oracle_width;
            if (!doc.options.width_cap) throw InputError("oracle needs --max-width or a width_cap directive");
            const OracleResult r = brute_force_optimal(doc.graph, doc.options, budget);
            json j;
            j["status"] = r.feasible ? "optimal" : "infeasible";
            j["explored"] = r.explored;
            if (r.feasible) {
                j["optimal_length"] = r.optimal_length;
                j["witness"] = json::parse(emit_layout(r.witness, doc.graph));
            }
            out << j.dump(2) << '\n';
            return r.feasible ? kOk : kInfeasible;
        }
        if (*bench_cmd) {
            if (corpus.max_layers < corpus.min_layers || corpus.max_layer_size < corpus.min_layer_size) {
                throw InputError("bench: empty layer or size range");
            }
            const BenchReport report = bench_compare(random_corpus(corpus), bench_options);
            const BenchSummary& s = report.summary;
            json j;
            j["instances"] = s.instances;
            j["failures"] = s.failures;
            j["vacuous"] = s.vacuous;
            j["length_overhead"] = overhead_json(s.length);
            j["width_overhead"] = overhead_json(s.width);
            j["total_ms"] = s.total_ms;
            if (with_records) {
                auto records = json::array();
                for (const auto& r : report.records) {
                    json rec;
                    rec["id"] = r.id;
                    rec["nodes"] = r.nodes;
                    rec["edges"] = r.edges;
                    rec["layers"] = r.layers;
                    rec["unconstrained"] = metrics_json(r.unconstrained);
                    rec["min_width_constrained"] = metrics_json(r.constrained);
                    rec["minimum_width"] = r.minimum_width;
                    rec["unconstrained_ms"] = r.unconstrained_ms;
                    rec["constrained_ms"] = r.constrained_ms;
                    rec["over_budget"] = r.over_budget;
                    if (!r.ok()) rec["error"] = r.error;
                    records.push_back(std::move(rec));
                }
                j["records"] = std::move(records);
            }
            out << j.dump(2) << '\n';
            return s.failures == 0 ? kOk : kInfeasible;
        }
        if (*generate_cmd) {
            if (*fig1_cmd) {
                out << emit_graph(fig1_family(fig1_k));
            } else {
                out << emit_graph(generate_random(random_spec));
            }
            return kOk;
        }
    } catch (const InfeasibleLayout& e) {
        err << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}

}  // namespace hcap::cli
