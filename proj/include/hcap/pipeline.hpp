#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcap/coordinates.hpp"
#include "hcap/flow_network.hpp"
#include "hcap/layered_graph.hpp"
#include "hcap/mcf_solver.hpp"

namespace hcap {

/// The solver found no feasible flow for the requested constraints.
class InfeasibleLayout : public std::runtime_error {
  public:
    InfeasibleLayout(const std::string& what, std::optional<Units> minimum_width = std::nullopt)
        : std::runtime_error(what), minimum_width_(minimum_width) {}
    /// Smallest feasible width, when known.
    std::optional<Units> minimum_width() const { return minimum_width_; }

  private:
    std::optional<Units> minimum_width_;
};

/// Everything produced by one solve, kept for verification and reporting.
struct Solution {
    FlowNetwork network;
    Flow flow;
    Layout layout;
};

/// Build, solve and extract. Throws InfeasibleLayout when no flow exists.
Solution solve_layout(const LayeredGraph& graph, const LayoutOptions& options,
                      SolverBackend backend = SolverBackend::SuccessiveShortestPaths);

/// Minimum total edge length, width unconstrained. options.width_cap is ignored.
Layout layout_min_length(const LayeredGraph& graph, const LayoutOptions& options = {});

/// Minimum total edge length among layouts of width <= max_width.
Layout layout_prescribed_width(const LayeredGraph& graph, Units max_width,
                               const LayoutOptions& options = {});

/// Widest layer measured in minimum gap distances. A lower bound on the
/// width of every layout; exact unless vertical edges interfere.
Units minimum_feasible_width(const LayeredGraph& graph, const LayoutOptions& options = {});

/// Smallest width cap the solver accepts. Starts at minimum_feasible_width and,
/// if vertical edges make that infeasible, doubles the cap at most
/// ceil(log2(big_upper)) times before binary searching back down. nullopt when
/// the constraints are infeasible at every width.
std::optional<Units> solved_minimum_width(const LayeredGraph& graph, const LayoutOptions& options = {});

struct BenchCorpusSpec {
    int count = 100;
    int min_layers = 2;
    int max_layers = 6;
    int min_layer_size = 1;
    int max_layer_size = 6;
    double edge_density = 0.35;
    std::uint64_t seed = 1;
};

std::vector<LayeredGraph> random_corpus(const BenchCorpusSpec& spec);

struct BenchRecord {
    std::string id;
    int nodes = 0;
    int edges = 0;
    int layers = 0;
    LayoutMetrics unconstrained;
    LayoutMetrics constrained;  // at the minimum feasible width
    Units minimum_width = 0;
    double unconstrained_ms = 0.0;
    double constrained_ms = 0.0;
    bool over_budget = false;
    std::string error;  // non-empty when the instance failed

    bool ok() const { return error.empty(); }
};

/// Overhead of one record relative to the better solution. When the optimum
/// is zero the ratio is undefined and the absolute difference is reported.
struct Overhead {
    bool relative = true;
    double value = 0.0;
};

Overhead length_overhead(const BenchRecord& r);  // constrained vs unconstrained length
Overhead width_overhead(const BenchRecord& r);   // unconstrained vs minimum width

struct OverheadStats {
    int relative_count = 0;
    double relative_mean = 0.0;
    double relative_p95 = 0.0;
    int absolute_count = 0;
    double absolute_mean = 0.0;
    double absolute_max = 0.0;
};

struct BenchSummary {
    int instances = 0;
    int failures = 0;
    bool vacuous = true;
    OverheadStats length;
    OverheadStats width;
    double total_ms = 0.0;
};

struct BenchReport {
    std::vector<BenchRecord> records;
    BenchSummary summary;
};

struct BenchOptions {
    double instance_budget_ms = 1000.0;
    int threads = 1;
};

BenchReport bench_compare(const std::vector<LayeredGraph>& corpus, const BenchOptions& options = {});

BenchSummary summarize(const std::vector<BenchRecord>& records);

}  // namespace hcap
