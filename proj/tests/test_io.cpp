#include "doctest.h"
#include "test_support.hpp"

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"

#include "hcap/cli.hpp"
#include "hcap/io.hpp"
#include "hcap/pipeline.hpp"

using namespace hcap;
using json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "hcap_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string write(const std::string& name, const std::string& text) {
    const auto path = scratch(name);
    std::ofstream(path) << text;
    return path.string();
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ParseError parse_error(const std::string& text) {
    try {
        parse_graph(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected ParseError");
    return ParseError("", 0, 0);
}

/// x attribute of every <circle>, keyed by its title.
std::map<std::string, int> circle_x(const std::string& svg) {
    std::map<std::string, int> out;
    const std::regex re("<circle cx=\"(-?\\d+)\" cy=\"-?\\d+\" r=\"\\d+\"><title>([^<]+)</title>");
    for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it) {
        out[(*it)[2]] = std::stoi((*it)[1]);
    }
    return out;
}

int svg_width(const std::string& svg) {
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, std::regex("<svg[^>]* width=\"(\\d+)\"")));
    return std::stoi(m[1]);
}

}  // namespace

TEST_CASE("parse a minimal document") {
    const auto doc = parse_graph("hcap-graph 1\nlayer a\nlayer b\nedge a b\n");
    CHECK(doc.graph.layer_count() == 2);
    CHECK(doc.graph.edges() == std::vector<Edge>{{"a", "b"}});
    CHECK_FALSE(doc.options.width_cap.has_value());
    CHECK(doc.options.min_dist.empty());
    CHECK(doc.options.normalize);
}

TEST_CASE("parse options, comments and long edges") {
    const std::string text =
        "# instance\n"
        "hcap-graph 1\n"
        "layer a b   # two nodes\n"
        "layer c\n"
        "layer d e\n"
        "edge a c\n"
        "long b e 1\n"
        "edge c d\n"
        "width_cap 5\n"
        "min_dist 0 1 2\n"
        "max_dist 2 1 3\n"
        "vertical b e\n"
        "normalize false\n";
    const auto doc = parse_graph(text);
    CHECK(validate(doc.graph).ok);
    CHECK(doc.graph.layer_size(1) == 2);
    CHECK(doc.graph.dummy_map().size() == 1);
    CHECK(doc.options.width_cap == 5);
    CHECK(doc.options.min_gap(0, 1) == 2);
    CHECK(doc.options.max_gap(2, 1) == 3);
    CHECK(doc.options.vertical_edges.size() == 2);
    CHECK_FALSE(doc.options.normalize);
}

TEST_CASE("parse errors carry locations") {
    SUBCASE("undeclared node") {
        const auto e = parse_error("hcap-graph 1\nlayer a\nlayer b\nedge a zz\n");
        CHECK(e.line() == 4);
        CHECK(e.column() == 8);
        CHECK(e.message().find("zz") != std::string::npos);
    }
    SUBCASE("duplicate label") {
        const auto e = parse_error("hcap-graph 1\nlayer a b\nlayer b\n");
        CHECK(e.line() == 3);
        CHECK(e.column() == 7);
        CHECK(e.message().find("duplicate") != std::string::npos);
    }
    SUBCASE("bad header") {
        CHECK(parse_error("graph 1\n").line() == 1);
        CHECK(parse_error("hcap-graph 2\n").column() == 12);
        CHECK(parse_error("").line() == 1);
    }
    SUBCASE("unknown directive") {
        const auto e = parse_error("hcap-graph 1\n  frobnicate\n");
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
    SUBCASE("semantic problems") {
        CHECK(parse_error("hcap-graph 1\nlayer a\nlayer b\nedge a b\nedge a b\n").line() == 5);
        CHECK(parse_error("hcap-graph 1\nlayer a\nlayer b\nedge b a\n").line() == 4);
        CHECK(parse_error("hcap-graph 1\nlayer a b\nedge a b\n").line() == 3);
        CHECK(parse_error("hcap-graph 1\nlayer a\nlayer\nlayer b\nedge a b\n").line() == 5);
        CHECK(parse_error("hcap-graph 1\nlayer a\nlayer b\nlong a b 0\n").line() == 4);
        CHECK(parse_error("hcap-graph 1\nlayer a\nlayer\nlayer b\nlong a b 3\n").line() == 5);
        CHECK(parse_error("hcap-graph 1\nlayer a\nlayer b\nwidth_cap x\n").column() == 11);
        CHECK(parse_error("hcap-graph 1\nlayer a b\nmin_dist 0 0 2\n").line() == 3);
        CHECK(parse_error("hcap-graph 1\nlayer a b\nmin_dist 0 1 3\nmax_dist 0 1 2\n").line() == 4);
        CHECK(parse_error("hcap-graph 1\nlayer a\nlayer b\nvertical b a\n").line() == 4);
        CHECK(parse_error("hcap-graph 1\nlayer a$\n").column() == 7);
    }
}

TEST_CASE("emit and parse round-trip") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = testing::random_long_edge_graph(seed);
        const auto g = properize(inst.graph, inst.positions);
        LayoutOptions opt;
        if (seed % 2) opt.width_cap = static_cast<Units>(seed % 7);
        if (g.layer_size(0) > 1) opt.min_dist[{0, 1}] = 2;
        if (g.layer_size(0) > 1 && seed % 3 == 0) opt.max_dist[{0, 1}] = 4;
        if (seed % 5 == 0) opt.vertical_edges = g.segments_of(g.edges().front());
        opt.normalize = seed % 4 != 0;
        const std::string text = emit_graph(g, opt);
        const auto doc = parse_graph(text);
        CHECK(doc.graph == g);
        CHECK(doc.options.width_cap == opt.width_cap);
        CHECK(doc.options.min_dist == opt.min_dist);
        CHECK(doc.options.max_dist == opt.max_dist);
        CHECK(doc.options.vertical_edges == opt.vertical_edges);
        CHECK(doc.options.normalize == opt.normalize);
        CHECK(emit_graph(doc.graph, doc.options) == text);
    }
}

TEST_CASE("emit_layout") {
    SUBCASE("single node") {
        LayeredGraph g({{"v"}}, {});
        const auto text = emit_layout(make_layout(g, {0}), g);
        const auto j = json::parse(text);
        CHECK(j["nodes"].size() == 1);
        CHECK(j["nodes"][0]["label"] == "v");
        CHECK(j["metrics"]["total_length"] == 0);
        CHECK(j["metrics"]["width"] == 0);
        CHECK(j["status"] == "optimal");
        // fixed key order
        CHECK(text.find("\"format\"") < text.find("\"status\""));
        CHECK(text.find("\"status\"") < text.find("\"metrics\""));
        CHECK(text.find("\"metrics\"") < text.find("\"nodes\""));
    }
    SUBCASE("fig1_family(4) capped") {
        const auto g = fig1_family(4);
        const auto j = json::parse(emit_layout(layout_prescribed_width(g, 1), g));
        CHECK(j["metrics"]["total_length"] == 1);
        CHECK(j["metrics"]["width"] == 1);
    }
    SUBCASE("byte identical across runs") {
        const auto g = generate_random({4, 2, 5, 0.4, 42});
        CHECK(emit_layout(layout_min_length(g), g) == emit_layout(layout_min_length(g), g));
    }
}

TEST_CASE("render_svg") {
    SUBCASE("single edge") {
        LayeredGraph g({{"u"}, {"v"}}, {{"u", "v"}});
        const auto svg = render_svg(make_layout(g, {0, 0}), g);
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(svg.find("version=\"1.1\"") != std::string::npos);
        CHECK(circle_x(svg).size() == 2);
        std::size_t lines = 0;
        for (auto p = svg.find("<line"); p != std::string::npos; p = svg.find("<line", p + 1)) ++lines;
        CHECK(lines == 1);
    }
    SUBCASE("dummy chains become polylines") {
        LayeredGraph raw({{"a"}, {"m"}, {"b"}}, {{"a", "b"}, {"a", "m"}});
        const auto g = properize(raw, {{{"a", "b"}, {1}}});
        const auto svg = render_svg(layout_min_length(g), g);
        CHECK(svg.find("<polyline") != std::string::npos);
        CHECK(circle_x(svg).size() == 3);
    }
    SUBCASE("vertical edge has equal x at both ends") {
        const auto g = generate_random({3, 2, 3, 0.6, 11});
        LayoutOptions opt;
        const Edge e = g.edges()[g.edge_count() / 2];
        opt.vertical_edges.push_back(e);
        const auto xs = circle_x(render_svg(layout_min_length(g, opt), g));
        CHECK(xs.at(e.source) == xs.at(e.target));
    }
    SUBCASE("capped fig1 is narrower") {
        const auto g = fig1_family(6);
        const auto capped = render_svg(layout_prescribed_width(g, 1), g);
        const auto free = render_svg(layout_min_length(g), g);
        CHECK(svg_width(capped) < svg_width(free));
        CHECK(render_svg(layout_min_length(g), g) == free);
    }
}

TEST_CASE("cli generate and layout") {
    const auto fig = run_cli({"generate", "fig1", "6"});
    REQUIRE(fig.code == cli::kOk);
    const auto path = write("fig6.txt", fig.out);

    const auto capped = run_cli({"layout", path, "--max-width", "1"});
    REQUIRE(capped.code == cli::kOk);
    const auto j = json::parse(capped.out);
    CHECK(j["metrics"]["total_length"] == 3);
    CHECK(j["metrics"]["width"] == 1);

    const auto svg_path = scratch("fig6.svg");
    const auto out_path = scratch("fig6.json");
    const auto free = run_cli({"layout", path, "--svg", svg_path.string(), "-o", out_path.string()});
    REQUIRE(free.code == cli::kOk);
    CHECK(free.out.empty());
    CHECK(json::parse(slurp(out_path))["metrics"]["width"] == 4);
    CHECK(slurp(svg_path).find("<svg") != std::string::npos);

    const auto random = run_cli({"generate", "random", "--layers", "3", "--seed", "4"});
    CHECK(random.code == cli::kOk);
    CHECK(parse_graph(random.out).graph.layer_count() == 3);
}

TEST_CASE("cli constraint flags") {
    const auto path = write("pair.txt", "hcap-graph 1\nlayer a b\nlayer c d\nedge a d\nedge b c\n");
    const auto r = run_cli({"layout", path, "--vertical", "a:d", "--min-dist", "0:1:2", "--max-dist", "1:1:3"});
    REQUIRE(r.code == cli::kOk);
    const auto j = json::parse(r.out);
    std::map<std::string, int> x;
    for (const auto& n : j["nodes"]) x[n["label"]] = n["x"];
    CHECK(x["a"] == x["d"]);
    CHECK(x["b"] - x["a"] >= 2);
    CHECK(x["d"] - x["c"] <= 3);

    const auto long_path =
        write("long.txt", "hcap-graph 1\nlayer a x\nlayer m\nlayer n\nlayer b\nlong a b 1 0\nedge x m\nedge m n\n");
    const auto straight = run_cli({"layout", long_path, "--straight-inner-segments"});
    REQUIRE(straight.code == cli::kOk);
    const auto doc = parse_graph(slurp(long_path));
    const auto sj = json::parse(straight.out);
    std::map<std::string, int> sx;
    for (const auto& n : sj["nodes"]) sx[n["label"]] = n["x"];
    for (const auto& seg : doc.graph.inner_segments()) CHECK(sx[seg.source] == sx[seg.target]);
}

TEST_CASE("cli exit codes") {
    const auto good = write("good.txt", "hcap-graph 1\nlayer a b c\nlayer d\nedge a d\n");
    CHECK(run_cli({"layout", good, "--max-width", "1"}).code == cli::kInfeasible);
    const auto infeasible = run_cli({"layout", good, "--max-width", "1"});
    CHECK(infeasible.err.find("2") != std::string::npos);
    CHECK(run_cli({"layout", good, "--max-width", "2"}).code == cli::kOk);

    const auto bad = write("bad.txt", "hcap-graph 1\nlayer a\nedge a q\n");
    const auto parse = run_cli({"layout", bad});
    CHECK(parse.code == cli::kInputError);
    CHECK(parse.err.find(":3:") != std::string::npos);

    CHECK(run_cli({"layout", scratch("missing.txt").string()}).code == cli::kInputError);
    CHECK(run_cli({"layout", good, "--min-dist", "0:0:2"}).code == cli::kInputError);
    CHECK(run_cli({"layout", good, "--min-dist", "0:1:3", "--max-dist", "0:1:2"}).code == cli::kInputError);
    CHECK(run_cli({"layout", good, "--vertical", "a:b"}).code == cli::kInputError);
    CHECK(run_cli({"layout", good, "--max-width", "abc"}).code == cli::kInputError);
    CHECK(run_cli({"frobnicate"}).code == cli::kInputError);
    CHECK(run_cli({}).code == cli::kInputError);
    CHECK(run_cli({"generate", "fig1", "3"}).code == cli::kInputError);
    CHECK(run_cli({"--help"}).code == cli::kOk);
}

TEST_CASE("cli verify") {
    const auto path = write("verify.txt", run_cli({"generate", "fig1", "7"}).out);
    const auto r = run_cli({"verify", path, "--max-width", "1"});
    CHECK(r.code == cli::kOk);
    for (const char* name : {"feasible", "optimal", "P1", "P2", "P3", "P4", "L1", "OPT_EQ"}) {
        CHECK(r.out.find(std::string(name) + " pass") != std::string::npos);
    }
    CHECK(r.out.find("cost 4 length 4 width 1") != std::string::npos);
    CHECK(run_cli({"verify", path, "--max-width", "0"}).code == cli::kInfeasible);
}

TEST_CASE("cli oracle") {
    const auto path = write("oracle.txt", run_cli({"generate", "fig1", "5"}).out);
    const auto r = run_cli({"oracle", path, "--max-width", "1"});
    REQUIRE(r.code == cli::kOk);
    const auto j = json::parse(r.out);
    CHECK(j["optimal_length"] == 2);
    CHECK(j["witness"]["metrics"]["width"] == 1);
    CHECK(run_cli({"oracle", path}).code == cli::kInputError);
    CHECK(run_cli({"oracle", path, "--max-width", "40", "--budget", "10"}).code == cli::kInputError);
    const auto tight = write("tight.txt", "hcap-graph 1\nlayer a b c\n");
    CHECK(run_cli({"oracle", tight, "--max-width", "1"}).code == cli::kInfeasible);
}

TEST_CASE("cli bench") {
    const auto r = run_cli({"bench", "--count", "5", "--seed", "3", "--records"});
    REQUIRE(r.code == cli::kOk);
    const auto j = json::parse(r.out);
    CHECK(j["instances"] == 5);
    CHECK(j["failures"] == 0);
    CHECK(j["records"].size() == 5);
    CHECK(run_cli({"bench", "--count", "5", "--seed", "3", "--records"}).out.size() > 0);
    const auto empty = json::parse(run_cli({"bench", "--count", "0"}).out);
    CHECK(empty["vacuous"] == true);
    CHECK(run_cli({"bench", "--density", "2"}).code == cli::kInputError);
}
