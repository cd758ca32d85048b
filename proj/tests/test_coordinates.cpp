#include "doctest.h"
#include "test_support.hpp"

#include "hcap/coordinates.hpp"
#include "hcap/pipeline.hpp"

using namespace hcap;

namespace {

/// Flow with every A-edge at 1, routed by the solver with A pinned.
std::vector<Units> unit_gap_flow(const FlowNetwork& net) {
    std::vector<FlowNetwork::BoundOverride> pins;
    for (int id : net.edges_of_kind(ArcKind::A)) pins.push_back({id, 1, 1});
    const auto f = solve_min_cost_flow(net.with_bounds(pins));
    REQUIRE(f.optimal());
    return f.values;
}

}  // namespace

TEST_CASE("unit gaps give consecutive columns") {
    // equal layer sizes, otherwise the layers cannot all carry the same f(s)
    const auto g = generate_random({4, 4, 4, 0.3, 3});
    const auto net = build_network(g);
    const auto flow = unit_gap_flow(net);
    const auto layout = extract_coordinates(g, net, flow, true);
    for (NodeIndex v = 0; v < g.node_count(); ++v) CHECK(layout.x[v] == g.slot(v).pos);
    const auto raw = extract_coordinates(g, net, flow, false);
    for (NodeIndex v = 0; v < g.node_count(); ++v) CHECK(raw.x[v] == g.slot(v).pos + 1);
}

TEST_CASE("fig1_family(4) capped solve gives two columns") {
    LayoutOptions opt;
    opt.width_cap = 1;
    const auto g = fig1_family(4);
    const auto net = build_network(g, opt);
    const auto f = solve_min_cost_flow(net);
    REQUIRE(f.optimal());
    const auto layout = extract_coordinates(g, net, f.values);
    CHECK(layout.x_of(g, "l2") == layout.x_of(g, "l3"));
    CHECK(layout.x_of(g, "r2") == layout.x_of(g, "r3"));
    CHECK(layout.x_of(g, "r2") == layout.x_of(g, "l2") + 1);
    CHECK(layout.metrics.width == 1);
    CHECK(layout.metrics.total_length == 1);
    const auto report = verify_properties(g, net, f.values, true);
    CHECK(report.ok());
    CHECK(report.opt_eq.checked);
    CHECK(f.total_cost == 1);
}

TEST_CASE("extract_coordinates rejects infeasible flows") {
    const auto g = fig1_family(4);
    const auto net = build_network(g);
    CHECK_THROWS_AS(extract_coordinates(g, net, std::vector<Units>(net.edge_count(), 0)), std::invalid_argument);
}

TEST_CASE("layout_metrics") {
    SUBCASE("single edge stacked") {
        LayeredGraph g({{"u"}, {"v"}}, {{"u", "v"}});
        const auto m = layout_metrics(make_layout(g, {0, 0}), g);
        CHECK(m == LayoutMetrics{0, 0});
    }
    SUBCASE("fig1 drawings") {
        for (int k = 4; k <= 20; ++k) {
            const auto g = fig1_family(k);
            CHECK(testing::fig1_staircase(g).metrics == LayoutMetrics{0, k - 2});
            CHECK(testing::fig1_two_column(g).metrics == LayoutMetrics{k - 3, 1});
        }
    }
    SUBCASE("size mismatch") {
        LayeredGraph g({{"u"}, {"v"}}, {{"u", "v"}});
        Layout bad;
        bad.x = {0};
        CHECK_THROWS_AS(layout_metrics(bad, g), std::invalid_argument);
    }
}

TEST_CASE("normalization shifts but keeps metrics") {
    const auto g = fig1_family(6);
    auto layout = testing::fig1_staircase(g);
    for (auto& x : layout.x) x += 7;
    layout.metrics = layout_metrics(layout, g);
    const auto n = normalized(layout);
    CHECK(*std::min_element(n.x.begin(), n.x.end()) == 0);
    CHECK(n.metrics == layout.metrics);
    CHECK(layout_metrics(n, g) == layout.metrics);
}

TEST_CASE("solver outputs satisfy every property") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto g = testing::small_random_graph(seed);
        LayoutOptions opt;
        if (seed % 3 == 1) opt.width_cap = minimum_feasible_width(g) + static_cast<Units>(seed % 2);
        const auto net = build_network(g, opt);
        const auto f = solve_min_cost_flow(net);
        REQUIRE(f.optimal());
        const auto report = verify_properties(g, net, f.values, true);
        for (const auto* c : report.all()) {
            CAPTURE(seed);
            CAPTURE(c->name);
            CAPTURE(c->witness);
            CHECK(c->passed);
        }
        const auto layout = extract_coordinates(g, net, f.values, false);
        CHECK(testing::strictly_increasing(g, layout));
        // gaps equal A-flows exactly
        for (int i = 0; i < g.layer_count(); ++i) {
            for (int p = 1; p < g.layer_size(i); ++p) {
                CHECK(layout.x[g.index_at(i, p)] - layout.x[g.index_at(i, p - 1)] == f[net.a_edge(i, p)]);
            }
        }
        if (opt.width_cap) {
            CHECK(layout.metrics.width <= *opt.width_cap);
            CHECK(layout.metrics.width <= flow_value(net, f.values) - 2);
        }
    }
}

TEST_CASE("perturbed flows satisfy P1-P4 and L1") {
    int strict = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto g = testing::small_random_graph(seed);
        const auto net = build_network(g);
        const auto f = solve_min_cost_flow(net);
        REQUIRE(f.optimal());
        const auto p = testing::perturb_flow(net, f.values, seed + 1000, 4);
        REQUIRE(check_feasibility(net, p));
        const auto report = verify_properties(g, net, p, false);
        CHECK(report.p1.passed);
        CHECK(report.p2.passed);
        CHECK(report.p3.passed);
        CHECK(report.p4.passed);
        CHECK(report.l1.passed);
        CHECK_FALSE(report.opt_eq.checked);
        CHECK(report.ok());
        const auto layout = extract_coordinates(g, net, p);
        CHECK(testing::strictly_increasing(g, layout));
        if (flow_cost(net, p) > layout.metrics.total_length) ++strict;
    }
    CHECK(strict > 0);
}

TEST_CASE("OPT_EQ flags a non-optimal flow claimed optimal") {
    const auto g = fig1_family(5);
    const auto net = build_network(g);
    const auto f = solve_min_cost_flow(net);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto p = testing::perturb_flow(net, f.values, seed, 3);
        const auto layout = extract_coordinates(g, net, p);
        if (flow_cost(net, p) == layout.metrics.total_length) continue;
        const auto report = verify_properties(g, net, p, true);
        CHECK_FALSE(report.opt_eq.passed);
        CHECK_FALSE(report.opt_eq.witness.empty());
        CHECK_FALSE(report.ok());
        return;
    }
    FAIL("no perturbation produced a strictly costlier flow");
}
