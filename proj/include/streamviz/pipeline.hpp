#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "streamviz/community.hpp"
#include "streamviz/graph.hpp"
#include "streamviz/layout.hpp"
#include "streamviz/supergraph.hpp"

namespace streamviz {

/// A pipeline failure, tagged with the stage that raised it.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

enum class PipelineMode { kSupergraph, kFullColored };
enum class ThresholdBase { kModeDegree, kAverageDegree, kExplicit };

struct PipelineConfig {
  std::string input;
  PipelineMode mode = PipelineMode::kSupergraph;

  int rounds = 10;
  ThresholdBase threshold_base = ThresholdBase::kModeDegree;
  std::uint64_t threshold_value = 0;  // kExplicit only
  std::uint64_t threshold_scale = 1;  // multiplies the chosen base
  TieRule tie_rule = TieRule::kSrcJoinsDst;
  RoundMode round_mode = RoundMode::kContract;
  bool count_internal_edges = true;

  std::size_t sketch_rows = 4;
  std::size_t sketch_cols = 0;  // 0: derived from the edge count
  double sketch_fraction = 1e-3;
  std::size_t sketch_min_cols = 1024;

  int iterations = 0;  // 0: 100 for supergraphs, 500 for full graphs
  LayoutParams layout;
  bool unit_superedges = false;

  std::uint64_t seed = 1;
  int workers = 0;  // 0: $STREAMVIZ_WORKERS or all hardware threads

  std::string svg_path;
  std::string nodes_tsv_path;
  std::string report_path;
  std::string communities_tsv_path;
  std::string supergraph_tsv_prefix;  // writes <prefix>.nodes.tsv / <prefix>.edges.tsv
  bool draw_edges = true;

  /// Throws std::invalid_argument when a numeric parameter is out of range.
  void validate() const;
  int effective_iterations() const;
};

struct StageTiming {
  std::string name;
  double ms = 0.0;
};

struct Report {
  std::string mode;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::uint64_t degree_threshold = 0;
  int rounds_run = 0;
  std::size_t sketch_rows = 0;
  std::size_t sketch_cols = 0;
  std::size_t communities = 0;
  std::size_t supernodes = 0;
  std::size_t superedges = 0;
  std::size_t rendered_nodes = 0;
  int iterations = 0;
  double modularity = 0.0;
  std::vector<std::uint64_t> size_histogram;
  std::vector<StageTiming> stages;
  double total_ms = 0.0;
  std::vector<std::string> warnings;

  double stage_ms(const std::string& name) const;
  nlohmann::json to_json() const;
  std::string summary() const;
};

/// Everything a run produced, kept in memory as well as written to the
/// configured paths.
struct PipelineOutput {
  Report report;
  CommunityAssignment assignment;
  SuperGraph supergraph;
  std::vector<Vec2> positions;
  std::vector<double> radii;
  std::vector<int> classes;
  std::vector<std::int64_t> ids;  // external id (full mode) or community id per drawn node
  std::string svg;
  std::string nodes_tsv;
};

/// parse -> detect -> sizes -> contract -> layout -> colors -> export.
PipelineOutput run_pipeline(const PipelineConfig& cfg);
/// Same, starting from an in-memory graph (the parse stage is skipped).
PipelineOutput run_pipeline(const Graph& g, const PipelineConfig& cfg);

enum class AblationAxis { kHashes, kRounds, kThreshold };

struct AblationRow {
  std::uint64_t value = 0;
  double time_ms = 0.0;
  std::size_t supernodes = 0;
  std::size_t superedges = 0;
  double modularity = 0.0;
};

/// Re-runs the pipeline once per value: sketch rows, round count, or the
/// threshold multiplier. With an SVG path set, each run writes
/// <stem>_<axis><value>.svg.
std::vector<AblationRow> run_ablation(const Graph& g, const PipelineConfig& cfg, AblationAxis axis,
                                      const std::vector<std::uint64_t>& values);
void write_ablation_tsv(AblationAxis axis, const std::vector<AblationRow>& rows, std::ostream& out);
std::string axis_name(AblationAxis axis);

struct SpeedupResult {
  double pipeline_ms = 0.0;     // supergraph pipeline, default iterations
  double full_layout_ms = 0.0;  // full-graph layout alone
  int full_iterations = 500;
  double ratio = 0.0;           // full_layout_ms / pipeline_ms
  std::size_t supernodes = 0;
};

/// Times the supergraph pipeline against a full-graph layout of
/// `full_iterations` passes with the same layout parameters and workers.
SpeedupResult measure_speedup(const Graph& g, const PipelineConfig& cfg, int full_iterations = 500);

}  // namespace streamviz
