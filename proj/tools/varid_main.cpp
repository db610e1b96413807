// varid: identifiability analysis for stationary VAR(1) interaction graphs.
//
// Subcommands: maxc, graphs-from-maxc, stationary-cov, jacobian, dim,
// identify, recover, simulate, paper-examples. Output is machine-first JSON
// (--pretty for humans); matrices travel as headerless CSV. All randomness
// flows from a single --seed.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "varid/io.hpp"
#include "varid/selfcheck.hpp"

namespace {

using namespace varid;

ParsedGraph load_graph(const std::string& path) {
  auto parsed = parse_graph(read_file(path));
  if (parsed.dropped_self_loops > 0)
    std::cerr << "warning: " << path << ": dropped " << parsed.dropped_self_loops
              << " self-loop entr" << (parsed.dropped_self_loops == 1 ? "y" : "ies")
              << " (self-loops are implicit)\n";
  return parsed;
}

void print_or_write(const std::string& content, const std::string& out_path) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

/// Sampled subcommands retry on singular draws; the library itself never
/// retries silently.
VarParameters sample_with_retry(const DirectedGraph& g, std::uint64_t seed) {
  for (int attempt = 0;; ++attempt) {
    const auto p = sample_generic_parameters(g, seed + attempt);
    try {
      solve_stationary(p);
      return p;
    } catch (const SingularSystemError&) {
      if (attempt >= 4) throw;
      std::cerr << "warning: singular draw, retrying with seed " << (seed + attempt + 1) << "\n";
    }
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Identifiability of VAR(1) interaction graphs from stationary covariance"};
  app.require_subcommand(1);
  app.fallthrough();  // lets trailing --pretty reach the app-level flag

  bool pretty = false;
  app.add_flag("--pretty", pretty, "indent JSON output");

  // maxc
  auto* maxc = app.add_subcommand("maxc", "maximal classes of a graph");
  std::string maxc_graph;
  maxc->add_option("--graph", maxc_graph, "graph file (JSON or edge list)")->required();

  // graphs-from-maxc
  auto* gfm = app.add_subcommand("graphs-from-maxc", "graphs realizing a class set");
  std::string gfm_classes;
  std::size_t gfm_max_results = 1024;
  gfm->add_option("--classes", gfm_classes, "class set JSON file")->required();
  gfm->add_option("--max-results", gfm_max_results, "cap on returned graphs");

  // stationary-cov
  auto* scov = app.add_subcommand("stationary-cov", "stationary covariance of parameters");
  std::string scov_params, scov_out;
  scov->add_option("--params", scov_params, "parameters JSON file")->required();
  scov->add_option("--out", scov_out, "output CSV path (default stdout)");

  // jacobian
  auto* jac = app.add_subcommand("jacobian", "Jacobian bundle and rank report");
  std::string jac_params, jac_graph;
  std::optional<std::uint64_t> jac_seed;
  int jac_trials = 5;
  double jac_tol = 1e-8;
  jac->add_option("--params", jac_params, "parameters JSON file");
  jac->add_option("--graph", jac_graph, "graph file; parameters are sampled");
  jac->add_option("--seed", jac_seed, "random seed (drives sampling and the rank report)")
      ->required();
  jac->add_option("--trials", jac_trials, "draws for the rank report");
  jac->add_option("--rank-tol", jac_tol, "singular value cutoff factor");

  // dim
  auto* dim_cmd = app.add_subcommand("dim", "model dimension of a graph");
  std::string dim_graph;
  std::optional<std::uint64_t> dim_seed;
  int dim_trials = 5;
  double dim_tol = 1e-8;
  dim_cmd->add_option("--graph", dim_graph, "graph file")->required();
  dim_cmd->add_option("--seed", dim_seed, "random seed (required for multi-edge graphs)");
  dim_cmd->add_option("--trials", dim_trials, "draws for the numeric path");
  dim_cmd->add_option("--rank-tol", dim_tol, "singular value cutoff factor");

  // identify
  auto* ident = app.add_subcommand("identify", "pairwise identifiability of a family");
  std::vector<std::string> ident_graphs;
  bool trust_numeric = false, witness_check = false;
  std::optional<std::uint64_t> ident_seed;
  int ident_trials = 5;
  double ident_tol = 1e-8;
  ident->add_option("--graphs", ident_graphs, "graph files (two or more)")
      ->required()
      ->expected(-2);
  ident->add_flag("--trust-numeric-dims", trust_numeric,
                  "let numerically estimated dimensions drive the dimension criterion");
  ident->add_flag("--witness-check", witness_check,
                  "numerically confirm maximal-class verdicts through matroid queries");
  ident->add_option("--seed", ident_seed, "random seed");
  ident->add_option("--trials", ident_trials, "draws per rank estimate");
  ident->add_option("--rank-tol", ident_tol, "singular value cutoff factor");

  // recover
  auto* rec = app.add_subcommand("recover", "maximal classes from a covariance or samples");
  std::string rec_sigma, rec_samples, rec_threshold = "auto";
  rec->add_option("--sigma", rec_sigma, "covariance CSV file");
  rec->add_option("--samples", rec_samples, "samples CSV file (one sample per row)");
  rec->add_option("--threshold", rec_threshold, "support threshold, or 'auto'");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "draw samples from the model");
  std::string sim_params, sim_out, sim_mode = "iid";
  long long sim_count = 0;
  std::uint64_t sim_seed = 0;
  sim_cmd->add_option("--params", sim_params, "parameters JSON file")->required();
  sim_cmd->add_option("--count", sim_count, "number of samples")->required();
  sim_cmd->add_option("--seed", sim_seed, "random seed")->required();
  sim_cmd->add_option("--out", sim_out, "output CSV path (default stdout)");
  sim_cmd->add_option("--mode", sim_mode, "iid (stationary draws) or trajectory")
      ->check(CLI::IsMember({"iid", "trajectory"}));

  // paper-examples
  auto* pex = app.add_subcommand("paper-examples", "run the bundled example corpus");
  std::uint64_t pex_seed = 1;
  pex->add_option("--seed", pex_seed, "random seed for the sampled checks");

  if (argc <= 1) {
    std::cout << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return dynamic_cast<const CLI::CallForHelp*>(&e) != nullptr ? code : 1;
  }

  if (maxc->parsed()) {
    const auto g = load_graph(maxc_graph).graph;
    std::cout << dump(class_set_to_json(maximal_classes(g)), pretty) << "\n";
    return 0;
  }

  if (gfm->parsed()) {
    const auto mc = parse_class_set(read_file(gfm_classes));
    const auto result = graphs_from_maxclasses(mc, gfm_max_results);
    json graphs = json::array();
    for (const auto& g : result.graphs) graphs.push_back(graph_to_json(g));
    std::cout << dump(json{{"graphs", graphs}, {"complete", result.complete}}, pretty) << "\n";
    return 0;
  }

  if (scov->parsed()) {
    const auto p = parse_parameters(read_file(scov_params));
    print_or_write(emit_csv(solve_stationary(p).sigma), scov_out);
    return 0;
  }

  if (jac->parsed()) {
    if (jac_params.empty() == jac_graph.empty())
      throw InputError("jacobian: pass exactly one of --params or --graph");
    const VarParameters p = !jac_params.empty()
                                ? parse_parameters(read_file(jac_params))
                                : sample_with_retry(load_graph(jac_graph).graph, *jac_seed);
    const auto bundle = extended_jacobian(p);
    const auto rank = generic_rank(p.graph, jac_trials, *jac_seed, jac_tol);
    std::cout << dump(jacobian_to_json(bundle, rank), pretty) << "\n";
    return 0;
  }

  if (dim_cmd->parsed()) {
    const auto g = load_graph(dim_graph).graph;
    if (has_multi_edge(g) && !dim_seed)
      throw InputError("dim: this graph has a multi-edge, the numeric path needs --seed");
    const auto d = dimension(g, dim_trials, dim_seed.value_or(0), dim_tol);
    std::cout << dump(dimension_to_json(d), pretty) << "\n";
    return 0;
  }

  if (ident->parsed()) {
    std::vector<DirectedGraph> gs;
    for (const auto& path : ident_graphs) gs.push_back(load_graph(path).graph);
    bool stochastic = witness_check || trust_numeric;
    for (const auto& g : gs) stochastic = stochastic || has_multi_edge(g);
    if (stochastic && !ident_seed)
      throw InputError("identify: numeric dimensions or witness checks need --seed");
    IdentifyOptions opt;
    opt.trust_numeric_dims = trust_numeric;
    opt.trials = ident_trials;
    opt.seed = ident_seed.value_or(0);
    opt.rank_tol = ident_tol;
    const auto fam = identify_family(gs, opt);
    json pairs = json::array();
    for (const auto& v : fam.pairs) {
      json jv = verdict_to_json(v);
      if (witness_check && (v.criterion == Criterion::same_dim_different_maxclasses ||
                            v.criterion == Criterion::cross_maxclass_condition))
        jv["witness_check"] =
            matroid_witness_check(gs[v.pair.first], gs[v.pair.second], v, *ident_seed);
      pairs.push_back(std::move(jv));
    }
    std::cout << dump(json{{"n", gs.front().node_count()},
                           {"family_size", fam.family_size},
                           {"pairs", pairs},
                           {"family_identifiable", fam.family_identifiable}},
                      pretty)
              << "\n";
    return fam.family_identifiable ? 0 : 2;
  }

  if (rec->parsed()) {
    if (rec_sigma.empty() == rec_samples.empty())
      throw InputError("recover: pass exactly one of --sigma or --samples");
    Matrix sigma;
    long long count = 0;
    if (!rec_sigma.empty()) {
      sigma = parse_square_csv(read_file(rec_sigma));
    } else {
      const Matrix samples = parse_csv(read_file(rec_samples));
      count = samples.rows();
      SampleBatch batch{static_cast<int>(samples.cols()), samples,
                        SampleSource::iid_stationary, 0};
      sigma = empirical_covariance(batch);
    }
    double threshold = 0.0;
    if (rec_threshold == "auto")
      threshold = rec_sigma.empty() ? default_sample_threshold(sigma, count)
                                    : default_support_threshold(sigma);
    else
      threshold = std::stod(rec_threshold);
    const auto report = maxclasses_from_support(support_of(sigma, threshold));
    json j = recovery_to_json(report);
    j["threshold"] = threshold;
    if (!report.weakly_connected)
      std::cerr << "warning: support pattern is not weakly connected\n";
    std::cout << dump(j, pretty) << "\n";
    return 0;
  }

  if (sim_cmd->parsed()) {
    const auto p = parse_parameters(read_file(sim_params));
    const auto batch = sim_mode == "iid" ? sample_stationary(p, sim_count, sim_seed)
                                         : simulate_trajectory(p, sim_count, sim_seed);
    print_or_write(emit_csv(batch.samples), sim_out);
    return 0;
  }

  if (pex->parsed()) {
    const auto results = selfcheck::run_all(pex_seed);
    int failed = 0;
    for (const auto& r : results) {
      std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.index << ". " << r.name << " — "
                << r.detail << "\n";
      if (!r.pass) ++failed;
    }
    std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed")
              << "\n";
    return failed == 0 ? 0 : 1;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
