#include "streamviz/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <type_traits>

#include <fmt/format.h>

#include "streamviz/metrics.hpp"
#include "streamviz/parallel.hpp"
#include "streamviz/render.hpp"
#include "streamviz/sketch.hpp"

namespace streamviz {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Runs `body` as a named stage: times it into the report and rethrows any
// failure as a PipelineError carrying the stage name.
template <typename Body>
auto stage(Report& report, const std::string& name, Body&& body) {
  const auto start = Clock::now();
  try {
    if constexpr (std::is_void_v<decltype(body())>) {
      body();
      report.stages.push_back({name, elapsed_ms(start)});
    } else {
      auto result = body();
      report.stages.push_back({name, elapsed_ms(start)});
      return result;
    }
  } catch (const PipelineError&) {
    throw;
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  out << text;
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path));
}

template <typename Writer>
void write_stream(const std::string& path, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  write_text(path, buffer.str());
}

std::uint64_t choose_threshold_base(const PipelineConfig& cfg, const DegreeStats& stats) {
  std::uint64_t base = 0;
  switch (cfg.threshold_base) {
    case ThresholdBase::kModeDegree: base = stats.mode_degree; break;
    case ThresholdBase::kAverageDegree: base = static_cast<std::uint64_t>(std::llround(stats.average_degree)); break;
    case ThresholdBase::kExplicit: base = cfg.threshold_value; break;
  }
  return std::max<std::uint64_t>(base, 1) * cfg.threshold_scale;
}

}  // namespace

void PipelineConfig::validate() const {
  if (rounds < 1) throw std::invalid_argument("rounds must be positive");
  if (threshold_base == ThresholdBase::kExplicit && threshold_value == 0) {
    throw std::invalid_argument("explicit threshold must be positive");
  }
  if (threshold_scale == 0) throw std::invalid_argument("threshold scale must be positive");
  if (sketch_rows == 0) throw std::invalid_argument("sketch rows must be positive");
  if (!(sketch_fraction > 0.0)) throw std::invalid_argument("sketch fraction must be positive");
  if (iterations < 0) throw std::invalid_argument("iterations must be positive");
  if (!(layout.gravity >= 0.0)) throw std::invalid_argument("gravity must be non-negative");
  if (!(layout.repulsion > 0.0)) throw std::invalid_argument("repulsion must be positive");
  if (!(layout.theta >= 0.0)) throw std::invalid_argument("theta must be non-negative");
  if (!(layout.max_displacement > 0.0)) throw std::invalid_argument("max displacement must be positive");
  if (workers < 0) throw std::invalid_argument("workers must be non-negative");
}

int PipelineConfig::effective_iterations() const {
  if (iterations > 0) return iterations;
  return mode == PipelineMode::kSupergraph ? 100 : 500;
}

double Report::stage_ms(const std::string& name) const {
  for (const StageTiming& s : stages) {
    if (s.name == name) return s.ms;
  }
  return 0.0;
}

nlohmann::json Report::to_json() const {
  nlohmann::json stage_json = nlohmann::json::object();
  for (const StageTiming& s : stages) stage_json[s.name] = s.ms;
  return {
      {"mode", mode},
      {"nodes", nodes},
      {"edges", edges},
      {"degree_threshold", degree_threshold},
      {"rounds_run", rounds_run},
      {"sketch", {{"rows", sketch_rows}, {"cols", sketch_cols}}},
      {"iterations", iterations},
      {"metrics",
       {{"modularity", modularity}, {"communities", communities}, {"size_histogram", size_histogram}}},
      {"supernodes", supernodes},
      {"superedges", superedges},
      {"rendered_nodes", rendered_nodes},
      {"stages_ms", stage_json},
      {"total_ms", total_ms},
      {"warnings", warnings},
  };
}

std::string Report::summary() const {
  std::string out;
  out += fmt::format("mode            {}\n", mode);
  out += fmt::format("graph           {} nodes, {} edges\n", nodes, edges);
  out += fmt::format("threshold base  {} ({} rounds run)\n", degree_threshold, rounds_run);
  out += fmt::format("sketch          {} x {}\n", sketch_rows, sketch_cols);
  out += fmt::format("supergraph      {} supernodes, {} superedges\n", supernodes, superedges);
  out += fmt::format("modularity      {:.4f}\n", modularity);
  for (const StageTiming& s : stages) out += fmt::format("  {:<12} {:>10.1f} ms\n", s.name, s.ms);
  out += fmt::format("  {:<12} {:>10.1f} ms\n", "total", total_ms);
  for (const std::string& w : warnings) out += fmt::format("warning: {}\n", w);
  return out;
}

namespace {

// Shared body of both entry points. `out.report` may already hold the parse
// stage; `start` is when the run began.
PipelineOutput run_stages(const Graph& g, const PipelineConfig& cfg, PipelineOutput out, Clock::time_point start) {
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw PipelineError("config", e.what());
  }
  const int workers = resolve_workers(cfg.workers);
  const bool full = cfg.mode == PipelineMode::kFullColored;

  Report& report = out.report;
  report.mode = full ? "full-colored" : "supergraph";
  report.nodes = g.node_count();
  report.edges = g.edge_count();

  out.assignment = stage(report, "detect", [&] {
    const DegreeStats stats = degree_stats(g);
    const std::uint64_t base = choose_threshold_base(cfg, stats);
    if (base < 2) report.warnings.push_back("threshold base 1 lifted to 2");
    const ThresholdSchedule schedule = ThresholdSchedule::make(base, cfg.rounds, std::max<std::uint64_t>(stats.max_degree, 1));
    report.degree_threshold = schedule.base;
    DetectionOptions options;
    options.round.tie_rule = cfg.tie_rule;
    options.round.workers = workers;
    options.round.seed = cfg.seed;
    options.mode = cfg.round_mode;
    options.count_internal_edges = cfg.count_internal_edges;
    return detect_communities(g, schedule, options);
  });
  report.rounds_run = static_cast<int>(out.assignment.round_history.size());

  report.sketch_rows = cfg.sketch_rows;
  report.sketch_cols = cfg.sketch_cols > 0 ? cfg.sketch_cols
                                           : sketch_cols_for(g.edge_count(), cfg.sketch_fraction, cfg.sketch_min_cols);
  CountMinSketch sketch = stage(report, "sizes", [&] {
    CountMinSketch s(report.sketch_rows, report.sketch_cols, cfg.seed);
    accumulate_sizes(g, out.assignment, s, workers);
    return s;
  });
  if (sketch.saturated()) report.warnings.push_back("count-min sketch counter saturated");

  out.supergraph = stage(report, "contract", [&] { return contract(g, out.assignment, sketch, workers); });
  report.supernodes = out.supergraph.node_count();
  report.superedges = out.supergraph.edge_count();

  stage(report, "metrics", [&] {
    report.modularity = modularity(g, out.assignment);
    report.communities = out.assignment.community_count();
    report.size_histogram = size_histogram(out.assignment.label);
  });

  report.iterations = cfg.effective_iterations();
  LayoutParams params = cfg.layout;
  params.workers = workers;
  std::vector<std::int64_t> index_of(out.supergraph.node_count(), -1);
  std::vector<std::uint64_t> drawn_weights;
  stage(report, "layout", [&] {
    LayoutInput input;
    if (full) {
      input = LayoutInput::from_graph(g);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        out.ids.push_back(g.external_id(v));
        drawn_weights.push_back(g.degree(v) + 1);
      }
    } else {
      std::int64_t next = 0;
      for (const SuperNode& n : out.supergraph.nodes) {
        if (n.isolated) continue;
        index_of[n.community] = next++;
        out.ids.push_back(n.community);
        drawn_weights.push_back(n.weight);
      }
      input = LayoutInput::from_supergraph(out.supergraph, index_of, !cfg.unit_superedges);
    }
    if (input.node_count() == 0) throw std::runtime_error("nothing to draw");
    out.positions = run_layout(input, report.iterations, params, cfg.seed).positions;
  });
  report.rendered_nodes = out.positions.size();

  stage(report, "colors", [&] {
    const ColorAssignment colors = assign_colors(out.supergraph.weights());
    if (full) {
      out.classes = color_full_graph(g, out.assignment, colors);
    } else {
      for (const SuperNode& n : out.supergraph.nodes) {
        if (!n.isolated) out.classes.push_back(colors.color_class[n.community]);
      }
    }
    out.radii = compute_radii(drawn_weights, layout_diameter(out.positions));
  });

  stage(report, "export", [&] {
    const Palette palette = Palette::qualitative();
    std::vector<SvgEdge> svg_edges;
    if (cfg.draw_edges) {
      if (full) {
        for (const Edge& e : g.edges()) svg_edges.push_back({e.src, e.dst, 1.0});
      } else {
        for (const SuperEdge& e : out.supergraph.edges) {
          if (index_of[e.src] < 0 || index_of[e.dst] < 0) continue;
          svg_edges.push_back({static_cast<std::uint32_t>(index_of[e.src]), static_cast<std::uint32_t>(index_of[e.dst]),
                               static_cast<double>(e.multiplicity)});
        }
      }
    }
    out.svg = export_svg(out.positions, out.radii, out.classes, palette, svg_edges);
    std::ostringstream tsv;
    write_nodes_tsv(out.ids, out.positions, out.radii, out.classes, palette, tsv);
    out.nodes_tsv = tsv.str();

    if (!cfg.svg_path.empty()) write_text(cfg.svg_path, out.svg);
    if (!cfg.nodes_tsv_path.empty()) write_text(cfg.nodes_tsv_path, out.nodes_tsv);
    if (!cfg.communities_tsv_path.empty()) {
      write_stream(cfg.communities_tsv_path, [&](std::ostream& o) { write_community_tsv(g, out.assignment, o); });
    }
    if (!cfg.supergraph_tsv_prefix.empty()) {
      write_stream(cfg.supergraph_tsv_prefix + ".nodes.tsv", [&](std::ostream& o) { write_supernode_tsv(out.supergraph, o); });
      write_stream(cfg.supergraph_tsv_prefix + ".edges.tsv", [&](std::ostream& o) { write_superedge_tsv(out.supergraph, o); });
    }
  });

  report.total_ms = elapsed_ms(start);
  if (!cfg.report_path.empty()) {
    try {
      write_text(cfg.report_path, report.to_json().dump(2) + "\n");
    } catch (const std::exception& e) {
      throw PipelineError("report", e.what());
    }
  }
  return out;
}

}  // namespace

PipelineOutput run_pipeline(const PipelineConfig& cfg) {
  const auto start = Clock::now();
  PipelineOutput out;
  const Graph g = stage(out.report, "parse", [&] {
    if (cfg.input.empty()) throw std::invalid_argument("no input path");
    return read_edge_list_file(cfg.input);
  });
  return run_stages(g, cfg, std::move(out), start);
}

PipelineOutput run_pipeline(const Graph& g, const PipelineConfig& cfg) {
  return run_stages(g, cfg, PipelineOutput{}, Clock::now());
}

std::string axis_name(AblationAxis axis) {
  switch (axis) {
    case AblationAxis::kHashes: return "hashes";
    case AblationAxis::kRounds: return "rounds";
    case AblationAxis::kThreshold: return "threshold";
  }
  return "unknown";
}

std::vector<AblationRow> run_ablation(const Graph& g, const PipelineConfig& cfg, AblationAxis axis,
                                      const std::vector<std::uint64_t>& values) {
  std::vector<AblationRow> rows;
  for (std::uint64_t value : values) {
    if (value == 0) throw std::invalid_argument("ablation values must be positive");
    PipelineConfig run = cfg;
    run.report_path.clear();
    run.nodes_tsv_path.clear();
    run.communities_tsv_path.clear();
    run.supergraph_tsv_prefix.clear();
    switch (axis) {
      case AblationAxis::kHashes: run.sketch_rows = value; break;
      case AblationAxis::kRounds: run.rounds = static_cast<int>(value); break;
      case AblationAxis::kThreshold: run.threshold_scale = value; break;
    }
    if (!cfg.svg_path.empty()) {
      std::filesystem::path p(cfg.svg_path);
      p.replace_filename(fmt::format("{}_{}{}{}", p.stem().string(), axis_name(axis), value, p.extension().string()));
      run.svg_path = p.string();
    }
    const PipelineOutput result = run_pipeline(g, run);
    rows.push_back({value, result.report.total_ms, result.report.supernodes, result.report.superedges,
                    result.report.modularity});
  }
  return rows;
}

void write_ablation_tsv(AblationAxis axis, const std::vector<AblationRow>& rows, std::ostream& out) {
  out << axis_name(axis) << "\ttime_ms\tSN\tSE\tmodularity\n";
  for (const AblationRow& r : rows) {
    out << fmt::format("{}\t{:.1f}\t{}\t{}\t{:.4f}\n", r.value, r.time_ms, r.supernodes, r.superedges, r.modularity);
  }
}

SpeedupResult measure_speedup(const Graph& g, const PipelineConfig& cfg, int full_iterations) {
  PipelineConfig run = cfg;
  run.mode = PipelineMode::kSupergraph;
  run.svg_path.clear();
  run.nodes_tsv_path.clear();
  run.report_path.clear();
  run.communities_tsv_path.clear();
  run.supergraph_tsv_prefix.clear();

  SpeedupResult result;
  result.full_iterations = full_iterations;
  const PipelineOutput pipeline = run_pipeline(g, run);
  result.pipeline_ms = pipeline.report.total_ms;
  result.supernodes = pipeline.report.supernodes;

  LayoutParams params = cfg.layout;
  params.workers = resolve_workers(cfg.workers);
  const auto start = Clock::now();
  run_layout(LayoutInput::from_graph(g), full_iterations, params, cfg.seed);
  result.full_layout_ms = elapsed_ms(start);
  result.ratio = result.pipeline_ms > 0.0 ? result.full_layout_ms / result.pipeline_ms : 0.0;
  return result;
}

}  // namespace streamviz
