// streamviz: community-contracted graph layouts from edge lists.
//
//   streamviz run --input g.txt --svg out.svg --report report.json
//   streamviz ablate --input g.txt --axis hashes --values 1,2,3,4 --table hashes.tsv
//   streamviz bench --input g.txt
//   streamviz generate --kind clustered --output g.txt

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "streamviz/graph.hpp"
#include "streamviz/parallel.hpp"
#include "streamviz/pipeline.hpp"
#include "streamviz/synthetic.hpp"

namespace sv = streamviz;

namespace {

// Flags shared by run, ablate and bench. Everything maps onto PipelineConfig.
struct CommonFlags {
  std::string threshold_base = "mode";
  std::string tie_rule = "src-joins-dst";
  std::string round_mode = "contract";
  std::string speed_formula = "product";
  std::string attraction = "linear";
  std::string gravity_form = "linear";
  bool drop_internal_edges = false;
  bool no_edges = false;
};

void add_common(CLI::App* app, sv::PipelineConfig& cfg, CommonFlags& flags) {
  app->add_option("--input,-i", cfg.input, "edge list (two ids per line, # or % comments)")
      ->required()
      ->check(CLI::ExistingFile);
  app->add_option("--mode", cfg.mode, "supergraph or full-colored")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, sv::PipelineMode>{{"supergraph", sv::PipelineMode::kSupergraph},
                                                  {"full-colored", sv::PipelineMode::kFullColored}}));
  app->add_option("--rounds", cfg.rounds, "detection rounds")->check(CLI::PositiveNumber);
  app->add_option("--threshold-base", flags.threshold_base, "mode, average or a positive integer");
  app->add_option("--tie-rule", flags.tie_rule, "src-joins-dst, dst-joins-src or none")
      ->check(CLI::IsMember({"src-joins-dst", "dst-joins-src", "none"}));
  app->add_option("--round-mode", flags.round_mode, "contract or restream")
      ->check(CLI::IsMember({"contract", "restream"}));
  app->add_flag("--drop-internal-edges", flags.drop_internal_edges,
                "contract mode: stream only inter-community superedges in later rounds");
  app->add_option("--sketch-rows", cfg.sketch_rows, "hash functions")->check(CLI::PositiveNumber);
  app->add_option("--sketch-cols", cfg.sketch_cols, "columns (0 derives from the edge count)");
  app->add_option("--sketch-fraction", cfg.sketch_fraction, "columns per edge when derived")
      ->check(CLI::PositiveNumber);
  app->add_option("--sketch-min-cols", cfg.sketch_min_cols, "lower bound on derived columns");
  app->add_option("--iterations", cfg.iterations, "layout passes (0: 100 supergraph, 500 full)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--gravity", cfg.layout.gravity)->check(CLI::NonNegativeNumber);
  app->add_option("--repulsion", cfg.layout.repulsion)->check(CLI::PositiveNumber);
  app->add_option("--theta", cfg.layout.theta, "Barnes-Hut opening angle")->check(CLI::NonNegativeNumber);
  app->add_option("--max-displacement", cfg.layout.max_displacement)->check(CLI::PositiveNumber);
  app->add_option("--jitter-tolerance", cfg.layout.jitter_tolerance)->check(CLI::PositiveNumber);
  app->add_option("--speed-formula", flags.speed_formula, "product or sum")
      ->check(CLI::IsMember({"product", "sum"}));
  app->add_option("--attraction", flags.attraction, "linear or unit-away")
      ->check(CLI::IsMember({"linear", "unit-away"}));
  app->add_option("--gravity-form", flags.gravity_form, "linear or constant")
      ->check(CLI::IsMember({"linear", "constant"}));
  app->add_flag("--bare-swing", [&cfg](std::int64_t) { cfg.layout.mass_weighted_swing = false; },
                "local speed from |force - prev_force| without the mass factor");
  app->add_flag("--unit-superedges", cfg.unit_superedges, "ignore superedge multiplicity in the layout");
  app->add_option("--seed", cfg.seed);
  app->add_option("--workers", cfg.workers, fmt::format("threads (0: ${} or all cores)", sv::kWorkersEnv))
      ->check(CLI::NonNegativeNumber);
}

void add_outputs(CLI::App* app, sv::PipelineConfig& cfg, CommonFlags& flags) {
  app->add_option("--svg", cfg.svg_path, "layout drawing");
  app->add_option("--nodes-tsv", cfg.nodes_tsv_path, "id, x, y, radius, class, hex per drawn node");
  app->add_option("--report", cfg.report_path, "JSON report");
  app->add_option("--communities-tsv", cfg.communities_tsv_path, "node labels per round");
  app->add_option("--supergraph-tsv", cfg.supergraph_tsv_prefix, "writes PREFIX.nodes.tsv and PREFIX.edges.tsv");
  app->add_flag("--no-edges", flags.no_edges, "draw nodes only");
}

void finish(sv::PipelineConfig& cfg, const CommonFlags& flags) {
  if (flags.threshold_base == "mode") {
    cfg.threshold_base = sv::ThresholdBase::kModeDegree;
  } else if (flags.threshold_base == "average") {
    cfg.threshold_base = sv::ThresholdBase::kAverageDegree;
  } else {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(flags.threshold_base, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != flags.threshold_base.size() || value == 0) {
      throw CLI::ValidationError("--threshold-base", "expected mode, average or a positive integer");
    }
    cfg.threshold_base = sv::ThresholdBase::kExplicit;
    cfg.threshold_value = value;
  }
  if (flags.tie_rule == "dst-joins-src") cfg.tie_rule = sv::TieRule::kDstJoinsSrc;
  else if (flags.tie_rule == "none") cfg.tie_rule = sv::TieRule::kNone;
  cfg.round_mode = flags.round_mode == "restream" ? sv::RoundMode::kRestream : sv::RoundMode::kContract;
  cfg.count_internal_edges = !flags.drop_internal_edges;
  cfg.layout.speed_formula = flags.speed_formula == "sum" ? sv::SpeedFormula::kSum : sv::SpeedFormula::kProduct;
  cfg.layout.attraction = flags.attraction == "unit-away" ? sv::AttractionForm::kUnitAway : sv::AttractionForm::kLinear;
  cfg.layout.gravity_form = flags.gravity_form == "constant" ? sv::GravityForm::kConstant : sv::GravityForm::kLinear;
  cfg.draw_edges = !flags.no_edges;
}

int run_command(const sv::PipelineConfig& cfg) {
  const sv::PipelineOutput out = sv::run_pipeline(cfg);
  std::cout << out.report.summary();
  return 0;
}

int ablate_command(const sv::PipelineConfig& cfg, const std::string& axis_text,
                   const std::vector<std::uint64_t>& values, const std::string& table_path) {
  const sv::AblationAxis axis = axis_text == "hashes"   ? sv::AblationAxis::kHashes
                                : axis_text == "rounds" ? sv::AblationAxis::kRounds
                                                        : sv::AblationAxis::kThreshold;
  const sv::Graph g = sv::read_edge_list_file(cfg.input);
  const auto rows = sv::run_ablation(g, cfg, axis, values);
  if (table_path.empty()) {
    sv::write_ablation_tsv(axis, rows, std::cout);
    return 0;
  }
  std::ofstream out(table_path);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", table_path));
  sv::write_ablation_tsv(axis, rows, out);
  if (!out.flush()) throw std::runtime_error(fmt::format("failed writing '{}'", table_path));
  return 0;
}

int bench_command(const sv::PipelineConfig& cfg, int full_iterations) {
  const sv::Graph g = sv::read_edge_list_file(cfg.input);
  const sv::SpeedupResult r = sv::measure_speedup(g, cfg, full_iterations);
  std::cout << fmt::format("graph             {} nodes, {} edges\n", g.node_count(), g.edge_count());
  std::cout << fmt::format("workers           {}\n", sv::resolve_workers(cfg.workers));
  std::cout << fmt::format("supernodes        {}\n", r.supernodes);
  std::cout << fmt::format("pipeline          {:.1f} ms\n", r.pipeline_ms);
  std::cout << fmt::format("full layout       {:.1f} ms ({} iterations)\n", r.full_layout_ms, r.full_iterations);
  std::cout << fmt::format("speedup           {:.1f}x\n", r.ratio);
  return 0;
}

int generate_command(const std::string& kind, const sv::ClusteredSpec& clustered, const sv::PlantedCliques& planted,
                     std::uint64_t seed, const std::string& output, const std::string& truth_path) {
  const sv::SyntheticGraph s =
      kind == "planted" ? sv::planted_cliques(planted, seed) : sv::clustered_graph(clustered, seed);
  std::ofstream out(output);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", output));
  out << fmt::format("# {} nodes, {} edges, seed {}\n", s.graph.node_count(), s.graph.edge_count(), seed);
  sv::write_edge_list(s.graph, out);
  if (!out.flush()) throw std::runtime_error(fmt::format("failed writing '{}'", output));
  if (!truth_path.empty()) {
    std::ofstream truth(truth_path);
    if (!truth) throw std::runtime_error(fmt::format("cannot open '{}' for writing", truth_path));
    truth << "node\tcommunity\n";
    for (std::size_t v = 0; v < s.truth.size(); ++v) truth << v << '\t' << s.truth[v] << '\n';
    if (!truth.flush()) throw std::runtime_error(fmt::format("failed writing '{}'", truth_path));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Streaming community detection, supergraph contraction and ForceAtlas2 layout"};
  app.require_subcommand(1);

  sv::PipelineConfig run_cfg;
  CommonFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "full pipeline on one edge list");
  add_common(run, run_cfg, run_flags);
  add_outputs(run, run_cfg, run_flags);

  sv::PipelineConfig ablate_cfg;
  CommonFlags ablate_flags;
  std::string axis = "hashes";
  std::vector<std::uint64_t> values;
  std::string table_path;
  CLI::App* ablate = app.add_subcommand("ablate", "re-run the pipeline across one parameter");
  add_common(ablate, ablate_cfg, ablate_flags);
  ablate->add_option("--svg", ablate_cfg.svg_path, "base name; each run writes <stem>_<axis><value>.svg");
  ablate->add_flag("--no-edges", ablate_flags.no_edges, "draw nodes only");
  ablate->add_option("--axis", axis, "hashes, rounds or threshold (multiplier of the base)")
      ->check(CLI::IsMember({"hashes", "rounds", "threshold"}));
  ablate->add_option("--values", values, "comma-separated positive values")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  ablate->add_option("--table", table_path, "TSV output (stdout when omitted)");

  sv::PipelineConfig bench_cfg;
  CommonFlags bench_flags;
  int full_iterations = 500;
  CLI::App* bench = app.add_subcommand("bench", "time the pipeline against a full-graph layout");
  add_common(bench, bench_cfg, bench_flags);
  bench->add_option("--full-iterations", full_iterations)->check(CLI::PositiveNumber);

  std::string kind = "clustered";
  sv::ClusteredSpec clustered;
  sv::PlantedCliques planted;
  std::uint64_t gen_seed = 1;
  std::string output;
  std::string truth_path;
  CLI::App* generate = app.add_subcommand("generate", "write a synthetic edge list with known communities");
  generate->add_option("--kind", kind, "clustered or planted")->check(CLI::IsMember({"clustered", "planted"}));
  generate->add_option("--communities", clustered.communities)->check(CLI::PositiveNumber);
  generate->add_option("--community-size", clustered.community_size)->check(CLI::PositiveNumber);
  generate->add_option("--edges", clustered.edges)->check(CLI::PositiveNumber);
  generate->add_option("--mixing", clustered.mixing)->check(CLI::Range(0.0, 1.0));
  generate->add_option("--cliques", planted.cliques)->check(CLI::PositiveNumber);
  generate->add_option("--clique-size", planted.clique_size)->check(CLI::PositiveNumber);
  generate->add_option("--bridges", planted.bridges);
  generate->add_option("--seed", gen_seed);
  generate->add_option("--output,-o", output)->required();
  generate->add_option("--truth", truth_path, "node -> planted community TSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      finish(run_cfg, run_flags);
      return run_command(run_cfg);
    }
    if (*ablate) {
      finish(ablate_cfg, ablate_flags);
      return ablate_command(ablate_cfg, axis, values, table_path);
    }
    if (*bench) {
      finish(bench_cfg, bench_flags);
      return bench_command(bench_cfg, full_iterations);
    }
    if (*generate) return generate_command(kind, clustered, planted, gen_seed, output, truth_path);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const sv::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
