#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dispatchsim/errors.hpp"
#include "dispatchsim/format.hpp"
#include "dispatchsim/network.hpp"
#include "dispatchsim/policy_io.hpp"
#include "dispatchsim/simulator.hpp"
#include "dispatchsim/tuning.hpp"
#include "dispatchsim/version.hpp"

namespace {

using dispatchsim::fmt_double;
using nlohmann::json;

json iter_record_to_json(const dispatchsim::TuneIterRecord& rec) {
  json j;
  j["iteration"] = rec.iteration;
  j["phase"] = rec.phase;
  j["iter_best"] = rec.iter_best;
  j["best_so_far"] = rec.best_so_far;
  j["evals_primary"] = rec.evals_primary;
  j["evals_surrogate"] = rec.evals_surrogate;
  j["evals_audit"] = rec.evals_audit;
  j["amplitude"] = rec.amplitude;
  j["tabu"] = rec.tabu;
  j["wall_ms"] = rec.wall_ms;  // timing only; excluded from byte comparisons
  return j;
}

json metrics_to_json(const dispatchsim::SimMetrics& m) {
  json j;
  j["incidents"] = m.incidents;
  j["late"] = m.late;
  j["cost_total"] = m.cost_total;
  j["response_time_sum"] = m.response_time_sum;
  j["flar"] = m.flar;
  j["art"] = m.art;
  j["cost_per_incident"] = m.cost_per_incident;
  j["no_incidents"] = m.no_incidents;
  return j;
}

json aggregate_to_json(const dispatchsim::Aggregate& a) {
  json j;
  j["mean_incidents"] = a.mean_incidents;
  j["mean_late"] = a.mean_late;
  j["mean_cost_total"] = a.mean_cost_total;
  j["mean_flar"] = a.mean_flar;
  j["se_flar"] = a.se_flar;
  j["mean_art"] = a.mean_art;
  j["se_art"] = a.se_art;
  j["mean_cost_per_incident"] = a.mean_cost_per_incident;
  j["se_cost_per_incident"] = a.se_cost_per_incident;
  return j;
}

json provenance(std::uint64_t seed) {
  json j;
  j["version"] = dispatchsim::version_string;
  j["rng_algorithm"] = dispatchsim::rng_algorithm;
  j["master_seed"] = seed;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dispatchsim::InvalidInput("cannot write " + path);
  out << text;
}

double parse_maybe_inf(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity")
      return std::numeric_limits<double>::infinity();
    throw dispatchsim::InvalidInput("bad grid value: " + s);
  }
  return v.get<double>();
}

struct TuneCommon {
  std::string net_path, out_path, trace_path;
  std::uint64_t seed = 0;
  int threads = 1;
  double epsilon = 0.01;
  std::string basis = "Main4Plus2Steps";
  double gamma = 0.99;
  int samples = 30;
  bool no_crn = false;
  double percentile = 0.8;
};

void add_tune_common(CLI::App* cmd, TuneCommon& tc, bool adp_flags) {
  cmd->add_option("--net", tc.net_path, "network file")->required();
  cmd->add_option("-o,--out", tc.out_path, "policy output file")->required();
  cmd->add_option("--trace", tc.trace_path, "per-iteration trace (json-lines)");
  cmd->add_option("--seed", tc.seed, "master seed");
  cmd->add_option("--threads", tc.threads, "parallel evaluation bound");
  cmd->add_option("--epsilon", tc.epsilon, "overtime cost weight");
  if (!adp_flags) return;
  cmd->add_option("--basis", tc.basis,
                  "Main4 | Main6 | Main4Plus1Step | Main4Plus2Steps");
  cmd->add_option("--gamma", tc.gamma, "discount per time unit");
  cmd->add_option("-G,--samples", tc.samples, "Monte Carlo samples per action");
  cmd->add_flag("--no-crn", tc.no_crn, "independent draws per action");
  cmd->add_option("--percentile", tc.percentile, "busy repair-time quantile");
}

dispatchsim::AdpParams base_adp(const TuneCommon& tc) {
  dispatchsim::AdpParams base;
  base.basis.selector = dispatchsim::basis_selector_from_name(tc.basis);
  base.gamma = tc.gamma;
  base.samples = tc.samples;
  base.crn = !tc.no_crn;
  base.percentile = tc.percentile;
  base.epsilon = tc.epsilon;
  base.coeffs = dispatchsim::initial_alpha(base.basis);
  return base;
}

struct TraceFile {
  explicit TraceFile(const std::string& path) {
    if (path.empty()) return;
    out.emplace(path, std::ios::binary);
    if (!*out) throw dispatchsim::InvalidInput("cannot write " + path);
  }
  dispatchsim::TuneTraceSink sink() {
    if (!out) return nullptr;
    return [this](const dispatchsim::TuneIterRecord& rec) {
      *out << iter_record_to_json(rec).dump() << "\n";
    };
  }
  std::optional<std::ofstream> out;
};

void write_tuned_policy(const TuneCommon& tc, const dispatchsim::AdpParams& base,
                        const dispatchsim::TuneResult& result,
                        const char* tuner, json tuner_cfg) {
  dispatchsim::AdpParams tuned = base;
  tuned.coeffs = result.best;
  json doc;
  doc["policy"] = dispatchsim::adp_to_json(tuned);
  doc["provenance"] = provenance(tc.seed);
  doc["provenance"]["tuner"] = tuner;
  doc["provenance"]["config"] = std::move(tuner_cfg);
  doc["provenance"]["best_fitness"] = result.best_fitness;
  doc["provenance"]["total_evaluations"] = result.trace.total_evaluations;
  write_text(tc.out_path, doc.dump(2) + "\n");
  std::cout << "best fitness " << fmt_double(result.best_fitness) << " after "
            << result.trace.total_evaluations << " evaluations -> "
            << tc.out_path << "\n";
}

int run_generate(const dispatchsim::NetworkGenParams& gp, std::uint64_t seed,
                 const std::string& out) {
  dispatchsim::NetworkFile nf;
  nf.net = dispatchsim::generate_network(gp, seed);
  nf.alloc = dispatchsim::initial_allocation(nf.net, gp.M);
  nf.gen_params = gp;
  nf.seed = seed;
  dispatchsim::save_network(nf, out);
  const auto sets = dispatchsim::coverage_sets(nf.net);
  size_t min_cover = sets.empty() ? 0 : sets[0].size(), total = 0;
  for (const auto& s : sets) {
    min_cover = std::min(min_cover, s.size());
    total += s.size();
  }
  std::cout << "network K=" << nf.net.K() << " R=" << nf.net.R() << " M="
            << gp.M << " -> " << out << "\n"
            << "coverage: min " << min_cover << ", mean "
            << fmt_double(static_cast<double>(total) /
                          static_cast<double>(nf.net.K()))
            << " stations/machine\nallocation:";
  for (int r : nf.alloc.station_of_engineer) std::cout << " " << r;
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dispatch/relocation policy toolkit for maintenance networks"};
  app.set_version_flag("--version", dispatchsim::version_string);
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "sample a covered network");
  dispatchsim::NetworkGenParams gp;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--K", gp.K, "machines")->required();
  gen->add_option("--R", gp.R, "stations")->required();
  gen->add_option("--M", gp.M, "engineers")->required();
  gen->add_option("--TL", gp.TL, "late threshold")->required();
  gen->add_option("--lambda", gp.lambda, "failure rate")->required();
  gen->add_option("--mu", gp.mu, "repair rate")->required();
  gen->add_option("--d", gp.density, "density parameter")->required();
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("-o,--out", gen_out, "output network file")->required();
  gen->callback([&] { run_generate(gp, gen_seed, gen_out); });

  // tune
  auto* tune = app.add_subcommand("tune", "fit policy parameters");
  tune->require_subcommand(1);

  auto* ga = tune->add_subcommand("ga", "genetic algorithm over coefficients");
  TuneCommon gac;
  dispatchsim::GaConfig ga_cfg;
  double ga_horizon = -1.0;
  add_tune_common(ga, gac, true);
  ga->add_option("--pop", ga_cfg.population, "population size N");
  ga->add_option("--amp", ga_cfg.amplitude, "mutation amplitude A");
  ga->add_option("--elite", ga_cfg.elite_fraction, "elite fraction q");
  ga->add_option("--iters", ga_cfg.iterations, "iterations");
  ga->add_option("--fitness-horizon", ga_horizon,
                 "simulation horizon per evaluation (default 500/(lambda K))");
  ga->callback([&] {
    const auto nf = dispatchsim::load_network(gac.net_path);
    const auto base = base_adp(gac);
    ga_cfg.fitness_horizon =
        ga_horizon > 0.0 ? ga_horizon
                         : 500.0 / (nf.net.lambda * nf.net.K());
    ga_cfg.master_seed = gac.seed;
    auto fitness =
        dispatchsim::make_adp_fitness(nf.net, nf.alloc, base, gac.epsilon);
    TraceFile trace(gac.trace_path);
    const auto result = dispatchsim::genetic_tune(
        fitness, base.basis, ga_cfg, gac.threads, trace.sink());
    json cfg_json{{"tuner", "ga"},
                  {"population", ga_cfg.population},
                  {"amplitude", ga_cfg.amplitude},
                  {"elite_fraction", ga_cfg.elite_fraction},
                  {"iterations", ga_cfg.iterations},
                  {"fitness_horizon", ga_cfg.fitness_horizon},
                  {"epsilon", gac.epsilon}};
    write_tuned_policy(gac, base, result, "ga", cfg_json);
  });

  auto* ts = tune->add_subcommand("ts", "tabu search over coefficients");
  TuneCommon tsc;
  dispatchsim::TsConfig ts_cfg;
  double ts_sur = -1.0, ts_pri = -1.0;
  add_tune_common(ts, tsc, true);
  ts->add_option("-n,--n", ts_cfg.neighborhood, "candidates per iteration N");
  ts->add_option("--amp", ts_cfg.amplitude, "move amplitude A");
  ts->add_option("-f,--f", ts_cfg.surrogate_fraction,
                 "fraction promoted to primary evaluation");
  ts->add_option("--tls", ts_cfg.tabu_size, "tabu list size");
  ts->add_option("--tlt", ts_cfg.tenure, "tabu tenure, iterations");
  ts->add_option("--div-iters", ts_cfg.diversification_iters,
                 "diversification iterations");
  ts->add_option("--int-iters", ts_cfg.intensification_iters,
                 "intensification iterations");
  ts->add_option("--surrogate-horizon", ts_sur,
                 "screening horizon (default 30/(lambda K))");
  ts->add_option("--primary-horizon", ts_pri,
                 "full-evaluation horizon (default 500/(lambda K))");
  ts->callback([&] {
    const auto nf = dispatchsim::load_network(tsc.net_path);
    const auto base = base_adp(tsc);
    const double lk = nf.net.lambda * nf.net.K();
    ts_cfg.surrogate_horizon = ts_sur > 0.0 ? ts_sur : 30.0 / lk;
    ts_cfg.primary_horizon = ts_pri > 0.0 ? ts_pri : 500.0 / lk;
    ts_cfg.master_seed = tsc.seed;
    auto fitness =
        dispatchsim::make_adp_fitness(nf.net, nf.alloc, base, tsc.epsilon);
    TraceFile trace(tsc.trace_path);
    const auto result = dispatchsim::tabu_tune(fitness, base.basis, ts_cfg,
                                               tsc.threads, trace.sink());
    json cfg_json{{"tuner", "ts"},
                  {"neighborhood", ts_cfg.neighborhood},
                  {"amplitude", ts_cfg.amplitude},
                  {"surrogate_fraction", ts_cfg.surrogate_fraction},
                  {"tabu_size", ts_cfg.tabu_size},
                  {"tenure", ts_cfg.tenure},
                  {"diversification_iters", ts_cfg.diversification_iters},
                  {"intensification_iters", ts_cfg.intensification_iters},
                  {"surrogate_horizon", ts_cfg.surrogate_horizon},
                  {"primary_horizon", ts_cfg.primary_horizon},
                  {"epsilon", tsc.epsilon}};
    write_tuned_policy(tsc, base, result, "ts", cfg_json);
  });

  auto* gh = tune->add_subcommand("heuristic", "grid search over T1, T2, delta");
  TuneCommon ghc;
  std::string grid_file;
  double gh_horizon = -1.0;
  add_tune_common(gh, ghc, false);
  gh->add_option("--grid-file", grid_file, "json {\"T1\":[],\"T2\":[],\"delta\":[]}")
      ->required();
  gh->add_option("--horizon", gh_horizon,
                 "evaluation horizon (default 500/(lambda K))");
  gh->callback([&] {
    const auto nf = dispatchsim::load_network(ghc.net_path);
    std::ifstream in(grid_file, std::ios::binary);
    if (!in) throw dispatchsim::InvalidInput("cannot read " + grid_file);
    json gj;
    try {
      in >> gj;
    } catch (const json::exception& e) {
      throw dispatchsim::InvalidInput(grid_file + ": " + e.what());
    }
    dispatchsim::HeuristicGrids grids;
    try {
      for (const auto& v : gj.at("T1")) grids.T1.push_back(parse_maybe_inf(v));
      for (const auto& v : gj.at("T2")) grids.T2.push_back(parse_maybe_inf(v));
      for (const auto& v : gj.at("delta"))
        grids.delta.push_back(parse_maybe_inf(v));
    } catch (const json::exception& e) {
      throw dispatchsim::InvalidInput(grid_file + ": " + e.what());
    }
    dispatchsim::SimConfig cfg;
    cfg.horizon = gh_horizon > 0.0
                      ? gh_horizon
                      : 500.0 / (nf.net.lambda * nf.net.K());
    cfg.epsilon = ghc.epsilon;
    cfg.master_seed = ghc.seed;
    const auto result = dispatchsim::grid_search_heuristic(
        nf.net, nf.alloc, grids, cfg, ghc.threads);
    json doc;
    doc["policy"] = dispatchsim::heuristic_to_json(result.best);
    doc["provenance"] = provenance(ghc.seed);
    doc["provenance"]["tuner"] = "grid";
    doc["provenance"]["config"] = {{"horizon", cfg.horizon},
                                   {"epsilon", cfg.epsilon}};
    doc["provenance"]["best_fitness"] = result.best_fitness;
    auto points = json::array();
    for (const auto& p : result.points) {
      json pj{{"T1", p.params.T1},
              {"T2", p.params.T2},
              {"delta", p.params.delta},
              {"fitness", p.fitness},
              {"no_incidents", p.no_incidents}};
      if (std::isinf(p.params.delta)) pj["delta"] = "inf";
      points.push_back(std::move(pj));
    }
    doc["provenance"]["points"] = std::move(points);
    if (std::isinf(result.best.delta)) doc["policy"]["delta"] = "inf";
    write_text(ghc.out_path, doc.dump(2) + "\n");
    std::cout << "best T1=" << fmt_double(result.best.T1)
              << " T2=" << fmt_double(result.best.T2) << " delta="
              << fmt_double(result.best.delta) << " fitness "
              << fmt_double(result.best_fitness) << " -> " << ghc.out_path
              << "\n";
  });

  // compare
  auto* cmp = app.add_subcommand("compare", "simulate policies side by side");
  std::string cmp_net, cmp_out = "report", cmp_trace_prefix;
  std::vector<std::string> cmp_policies;
  int cmp_reps = 10, cmp_threads = 1;
  double cmp_horizon = -1.0, cmp_epsilon = 0.01, cmp_warmup = 0.0;
  std::uint64_t cmp_seed = 0;
  cmp->add_option("--net", cmp_net, "network file")->required();
  cmp->add_option("--policy", cmp_policies,
                  "'closest_first' or a policy json file (repeatable)")
      ->required();
  cmp->add_option("--reps", cmp_reps, "replications per policy");
  cmp->add_option("--horizon", cmp_horizon, "horizon (default 1000/lambda)");
  cmp->add_option("--epsilon", cmp_epsilon, "overtime cost weight");
  cmp->add_option("--warmup", cmp_warmup, "metrics window start");
  cmp->add_option("--seed", cmp_seed, "master seed");
  cmp->add_option("--threads", cmp_threads, "parallel replication bound");
  cmp->add_option("-o,--out", cmp_out, "output prefix (.json/.csv)");
  cmp->add_option("--trace-prefix", cmp_trace_prefix,
                  "write replication-0 transition traces");
  cmp->callback([&] {
    const auto nf = dispatchsim::load_network(cmp_net);
    const int M = static_cast<int>(nf.alloc.station_of_engineer.size());
    dispatchsim::SimConfig cfg;
    cfg.horizon = cmp_horizon > 0.0 ? cmp_horizon : 1000.0 / nf.net.lambda;
    cfg.epsilon = cmp_epsilon;
    cfg.warmup = cmp_warmup;
    cfg.master_seed = cmp_seed;
    json report;
    report["config"] = {{"net", cmp_net},       {"horizon", cfg.horizon},
                        {"epsilon", cfg.epsilon}, {"warmup", cfg.warmup},
                        {"reps", cmp_reps},     {"master_seed", cmp_seed}};
    report["provenance"] = provenance(cmp_seed);
    auto rows = json::array();
    std::string csv =
        "policy,rep,incidents,late,cost_total,response_time_sum,flar,art,"
        "cost_per_incident\n";
    for (size_t pi = 0; pi < cmp_policies.size(); ++pi) {
      const std::string& spec = cmp_policies[pi];
      std::unique_ptr<dispatchsim::Policy> policy;
      json policy_json;
      if (spec == "closest_first" || spec == "cf") {
        policy = std::make_unique<dispatchsim::ClosestFirstPolicy>();
        policy_json = dispatchsim::closest_first_to_json();
      } else {
        policy = dispatchsim::load_policy(spec, nf.net, M);
        std::ifstream in(spec, std::ios::binary);
        json doc = json::parse(in);
        policy_json = doc.contains("type") ? doc : doc.at("policy");
      }
      const std::string label =
          std::string(policy->name()) + "#" + std::to_string(pi);
      const auto rr = dispatchsim::replicate(nf.net, nf.alloc, *policy, cfg,
                                             cmp_reps, cmp_threads);
      json prow;
      prow["spec"] = spec;
      prow["name"] = label;
      prow["policy"] = policy_json;
      auto reps = json::array();
      for (size_t i = 0; i < rr.reps.size(); ++i) {
        reps.push_back(metrics_to_json(rr.reps[i]));
        const auto& m = rr.reps[i];
        csv += label + "," + std::to_string(i) + "," +
               std::to_string(m.incidents) + "," + std::to_string(m.late) +
               "," + fmt_double(m.cost_total) + "," +
               fmt_double(m.response_time_sum) + "," + fmt_double(m.flar) +
               "," + fmt_double(m.art) + "," + fmt_double(m.cost_per_incident) +
               "\n";
      }
      prow["replications"] = std::move(reps);
      prow["aggregate"] = aggregate_to_json(rr.agg);
      csv += label + ",mean,," + "," + fmt_double(rr.agg.mean_cost_total) +
             ",," + fmt_double(rr.agg.mean_flar) + "," +
             fmt_double(rr.agg.mean_art) + "," +
             fmt_double(rr.agg.mean_cost_per_incident) + "\n";
      csv += label + ",se,,,,," + fmt_double(rr.agg.se_flar) + "," +
             fmt_double(rr.agg.se_art) + "," +
             fmt_double(rr.agg.se_cost_per_incident) + "\n";
      std::cout << label << ": FLAR " << fmt_double(rr.agg.mean_flar) << " (se "
                << fmt_double(rr.agg.se_flar) << "), ART "
                << fmt_double(rr.agg.mean_art) << ", cost/incident "
                << fmt_double(rr.agg.mean_cost_per_incident) << "\n";
      if (!cmp_trace_prefix.empty()) {
        const std::string tpath =
            cmp_trace_prefix + "-" + std::to_string(pi) + ".trace.jsonl";
        std::ofstream tout(tpath, std::ios::binary);
        if (!tout) throw dispatchsim::InvalidInput("cannot write " + tpath);
        auto mine = policy->clone();
        dispatchsim::SimConfig rep0 = cfg;
        rep0.master_seed = dispatchsim::derive_seed(cfg.master_seed, 0);
        dispatchsim::simulate(
            nf.net, nf.alloc, *mine, rep0,
            [&](const dispatchsim::SystemState&, const dispatchsim::Action& a,
                const dispatchsim::SystemState& next,
                const dispatchsim::CostBreakdown& cost) {
              json line{{"t", next.time},
                        {"e", static_cast<int>(next.event.type)},
                        {"l", next.event.location},
                        {"a", dispatchsim::action_to_string(a)},
                        {"units", cost.unit_penalties},
                        {"ot", cost.overtime}};
              tout << line.dump() << "\n";
            });
      }
      rows.push_back(std::move(prow));
    }
    report["policies"] = std::move(rows);
    write_text(cmp_out + ".json", report.dump(2) + "\n");
    write_text(cmp_out + ".csv", csv);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const dispatchsim::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const dispatchsim::GenerationFailed& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
