#include "hcap/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace hcap {

Solution solve_layout(const LayeredGraph& graph, const LayoutOptions& options, SolverBackend backend) {
    FlowNetwork network = build_network(graph, options);
    Flow flow = solve_min_cost_flow(network, backend);
    if (!flow.optimal()) {
        throw InfeasibleLayout("no feasible layout; unsaturated network nodes: " +
                               describe_infeasibility(network, flow));
    }
    Layout layout = extract_coordinates(graph, network, flow.values, options.normalize);
    return {std::move(network), std::move(flow), std::move(layout)};
}

Layout layout_min_length(const LayeredGraph& graph, const LayoutOptions& options) {
    LayoutOptions unconstrained = options;
    unconstrained.width_cap.reset();
    return solve_layout(graph, unconstrained).layout;
}

Units minimum_feasible_width(const LayeredGraph& graph, const LayoutOptions& options) {
    Units widest = 0;
    for (int i = 0; i < graph.layer_count(); ++i) {
        Units sum = 0;
        for (int g = 1; g < graph.layer_size(i); ++g) sum += options.min_gap(i, g);
        widest = std::max(widest, sum);
    }
    return widest;
}

Layout layout_prescribed_width(const LayeredGraph& graph, Units max_width, const LayoutOptions& options) {
    const Units minimum = minimum_feasible_width(graph, options);
    if (max_width < minimum) {
        throw InfeasibleLayout("width " + std::to_string(max_width) +
                                   " is below the minimum feasible width " + std::to_string(minimum),
                               minimum);
    }
    LayoutOptions capped = options;
    capped.width_cap = max_width;
    try {
        return solve_layout(graph, capped).layout;
    } catch (const InfeasibleLayout& e) {
        const auto solved = solved_minimum_width(graph, options);
        if (solved) {
            throw InfeasibleLayout("width " + std::to_string(max_width) +
                                       " is below the minimum feasible width " + std::to_string(*solved) +
                                       " under the given constraints",
                                   solved);
        }
        throw;
    }
}

namespace {

bool feasible_at(const LayeredGraph& graph, LayoutOptions options, Units width) {
    options.width_cap = width;
    return solve_min_cost_flow(build_network(graph, options)).optimal();
}

}  // namespace

std::optional<Units> solved_minimum_width(const LayeredGraph& graph, const LayoutOptions& options) {
    LayoutOptions base = options;
    base.width_cap.reset();
    const Units lower = minimum_feasible_width(graph, base);
    if (feasible_at(graph, base, lower)) return lower;

    const FlowNetwork open = build_network(graph, base);
    if (!solve_min_cost_flow(open).optimal()) return std::nullopt;

    const int retries = static_cast<int>(std::ceil(std::log2(static_cast<double>(open.big_upper()))));
    Units bad = lower;
    Units good = -1;
    Units width = std::max<Units>(lower, 1);
    for (int r = 0; r < retries; ++r) {
        width *= 2;
        if (feasible_at(graph, base, width)) {
            good = width;
            break;
        }
        bad = width;
    }
    if (good < 0) {
        // the unconstrained optimum always fits below big_upper - 2
        good = open.big_upper() - 2;
        if (!feasible_at(graph, base, good)) return std::nullopt;
    }
    while (good - bad > 1) {
        const Units mid = bad + (good - bad) / 2;
        if (feasible_at(graph, base, mid)) good = mid;
        else bad = mid;
    }
    return good;
}

std::vector<LayeredGraph> random_corpus(const BenchCorpusSpec& spec) {
    std::vector<LayeredGraph> corpus;
    corpus.reserve(spec.count);
    for (int i = 0; i < spec.count; ++i) {
        const std::uint64_t seed = spec.seed * 1'000'003ULL + static_cast<std::uint64_t>(i);
        const int span = spec.max_layers - spec.min_layers + 1;
        const int layers = spec.min_layers + static_cast<int>(seed % static_cast<std::uint64_t>(span));
        corpus.push_back(generate_random({layers, spec.min_layer_size, spec.max_layer_size,
                                          spec.edge_density, seed}));
    }
    return corpus;
}

Overhead length_overhead(const BenchRecord& r) {
    if (r.unconstrained.total_length == 0) {
        return {false, static_cast<double>(r.constrained.total_length)};
    }
    return {true, static_cast<double>(r.constrained.total_length) /
                      static_cast<double>(r.unconstrained.total_length)};
}

Overhead width_overhead(const BenchRecord& r) {
    if (r.minimum_width == 0) return {false, static_cast<double>(r.unconstrained.width)};
    return {true, static_cast<double>(r.unconstrained.width) / static_cast<double>(r.minimum_width)};
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

BenchRecord run_instance(const LayeredGraph& graph, int index, const BenchOptions& options) {
    BenchRecord r;
    r.id = "instance-" + std::to_string(index);
    r.nodes = graph.node_count();
    r.edges = graph.edge_count();
    r.layers = graph.layer_count();
    try {
        auto start = Clock::now();
        r.unconstrained = layout_min_length(graph).metrics;
        r.unconstrained_ms = elapsed_ms(start);

        auto minimum = solved_minimum_width(graph);
        if (!minimum) throw InfeasibleLayout("no feasible width");
        r.minimum_width = *minimum;
        start = Clock::now();
        r.constrained = layout_prescribed_width(graph, r.minimum_width).metrics;
        r.constrained_ms = elapsed_ms(start);
        r.over_budget = r.unconstrained_ms > options.instance_budget_ms ||
                        r.constrained_ms > options.instance_budget_ms;
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    return r;
}

void accumulate(OverheadStats& stats, const std::vector<Overhead>& values) {
    std::vector<double> rel;
    std::vector<double> abs;
    for (const auto& o : values) (o.relative ? rel : abs).push_back(o.value);
    stats.relative_count = static_cast<int>(rel.size());
    stats.absolute_count = static_cast<int>(abs.size());
    if (!rel.empty()) {
        std::sort(rel.begin(), rel.end());
        double sum = 0.0;
        for (double v : rel) sum += v;
        stats.relative_mean = sum / static_cast<double>(rel.size());
        // nearest-rank percentile
        const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(rel.size())));
        stats.relative_p95 = rel[std::max<std::size_t>(rank, 1) - 1];
    }
    if (!abs.empty()) {
        double sum = 0.0;
        for (double v : abs) sum += v;
        stats.absolute_mean = sum / static_cast<double>(abs.size());
        stats.absolute_max = *std::max_element(abs.begin(), abs.end());
    }
}

}  // namespace

BenchSummary summarize(const std::vector<BenchRecord>& records) {
    BenchSummary s;
    s.instances = static_cast<int>(records.size());
    std::vector<Overhead> length;
    std::vector<Overhead> width;
    for (const auto& r : records) {
        if (!r.ok()) {
            ++s.failures;
            continue;
        }
        length.push_back(length_overhead(r));
        width.push_back(width_overhead(r));
        s.total_ms += r.unconstrained_ms + r.constrained_ms;
    }
    s.vacuous = length.empty();
    accumulate(s.length, length);
    accumulate(s.width, width);
    return s;
}

BenchReport bench_compare(const std::vector<LayeredGraph>& corpus, const BenchOptions& options) {
    BenchReport report;
    report.records.resize(corpus.size());
    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(corpus.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < corpus.size(); i = next++) {
            report.records[i] = run_instance(corpus[i], static_cast<int>(i), options);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    report.summary = summarize(report.records);
    return report;
}

}  // namespace hcap
