#include <spherecon/config_io.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace spherecon;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

SimOptions parse_sim_options(const json& j) {
  SimOptions opts;
  opts.dt = j.value("dt", 0.0);
  opts.t_max = j.value("t_max", opts.t_max);
  opts.consensus_tol = j.value("consensus_tol", opts.consensus_tol);
  opts.equilibrium_tol = j.value("equilibrium_tol", opts.equilibrium_tol);
  opts.backward = j.value("backward", false);
  opts.record_stride = j.value("record_stride", opts.record_stride);
  return opts;
}

void require_admissible(const GainFunction& gain, int dim, bool allow_inadmissible) {
  if (allow_inadmissible) return;
  if (!admissible(gain, dim)) {
    throw ConfigError("gain: '" + gain.name() + "' is not admissible on S^" + std::to_string(dim) +
                      " (conditions (i)/(iii)); pass --allow-inadmissible to override");
  }
}

int cmd_simulate(const std::string& config_path, const std::string& traj_path,
                 bool allow_inadmissible) {
  const json config = load_json(config_path);
  const std::string space = config.value("space", "sphere");
  const Graph graph = parse_graph(config.at("graph"));
  const GainFunction gain = parse_gain(config.at("gain"));
  SimOptions opts = parse_sim_options(config);
  opts.record_trajectory = !traj_path.empty();
  if (!config.contains("initial")) throw ConfigError("initial: missing");
  const json initial = config.at("initial");

  json summary;
  if (space == "sphere") {
    const int dim = config.value("dim", 2);
    require_admissible(gain, dim, allow_inadmissible);
    std::optional<SphereConfig> cfg;
    if (initial.contains("random_seed")) {
      Rng rng(initial.at("random_seed").get<std::uint64_t>());
      std::vector<UnitVector> states;
      for (int i = 0; i < graph.num_nodes(); ++i) states.push_back(sample_unit_sphere(dim, rng));
      cfg.emplace(std::move(states));
    } else if (initial.contains("states")) {
      cfg.emplace(parse_sphere_config(initial.at("states"), dim + 1));
    } else {
      throw ConfigError("initial: expected \"random_seed\" or \"states\"");
    }
    const auto result = integrate_sphere(*cfg, graph, gain, opts);
    summary = sim_summary_json(result);
    if (!traj_path.empty()) {
      std::ofstream out(traj_path);
      if (!out) throw ConfigError("cannot open trajectory output: " + traj_path);
      write_sphere_trajectory_csv(out, result, dim);
      std::ofstream sidecar(traj_path + ".json");
      sidecar << summary.dump(2) << "\n";
    }
  } else if (space == "so3") {
    const std::string protocol_name = config.value("protocol", "naive");
    So3Protocol protocol;
    if (protocol_name == "naive") {
      protocol = So3Protocol::naive;
    } else if (protocol_name == "composite") {
      protocol = So3Protocol::composite;
      require_admissible(gain, 2, allow_inadmissible);
    } else {
      throw ConfigError("protocol: expected \"naive\" or \"composite\"");
    }
    std::optional<RotationConfig> cfg;
    if (initial.contains("random_seed")) {
      Rng rng(initial.at("random_seed").get<std::uint64_t>());
      std::vector<Rotation3> states;
      for (int i = 0; i < graph.num_nodes(); ++i) states.push_back(sample_uniform_rotation(rng));
      cfg.emplace(std::move(states));
    } else if (initial.contains("states")) {
      cfg.emplace(parse_rotation_config(initial.at("states")));
    } else {
      throw ConfigError("initial: expected \"random_seed\" or \"states\"");
    }
    const CircleProtocol circle{config.value("n_bound", graph.num_nodes())};
    const auto result = integrate_so3(*cfg, graph, gain, protocol, circle, opts);
    summary = sim_summary_json(result);
    if (!traj_path.empty()) {
      std::ofstream out(traj_path);
      if (!out) throw ConfigError("cannot open trajectory output: " + traj_path);
      write_so3_trajectory_csv(out, result);
      std::ofstream sidecar(traj_path + ".json");
      sidecar << summary.dump(2) << "\n";
    }
  } else {
    throw ConfigError("space: expected \"sphere\" or \"so3\"");
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_spectrum(const std::string& config_path) {
  const json config = load_json(config_path);
  const GainFunction gain = parse_gain(config.at("gain"));
  if (config.contains("equilibrium")) {
    const json eq = config.at("equilibrium");
    const auto named = make_equilibrium(eq.at("kind").get<std::string>(), eq.value("n", -1));
    const auto report = classify_equilibrium(named.config, named.graph, gain);
    std::cout << report_to_json(report).dump(2) << "\n";
    return 0;
  }
  if (!config.contains("states") || !config.contains("graph")) {
    throw ConfigError("spectrum: expected \"equilibrium\" or (\"graph\" + \"states\")");
  }
  const Graph graph = parse_graph(config.at("graph"));
  const int dim = config.value("dim", 2);
  const SphereConfig cfg = parse_sphere_config(config.at("states"), dim + 1);
  const auto report = classify_equilibrium(cfg, graph, gain);
  std::cout << report_to_json(report).dump(2) << "\n";
  return 0;
}

int cmd_gains_check(const std::string& gain_spec, int dim) {
  const GainFunction gain = parse_gain_string(gain_spec);
  const auto cond_i = check_condition_i(gain);
  const auto cond_iii = check_condition_iii(gain, dim);
  json out{{"gain", gain.name()},
           {"dim", dim},
           {"condition_i", json{{"pass", cond_i.pass}}},
           {"condition_iii", json{{"pass", cond_iii.pass}}},
           {"admissible", cond_i.pass && cond_iii.pass}};
  if (!cond_i.pass) {
    out["condition_i"]["witness"] = cond_i.witness;
    out["condition_i"]["value"] = cond_i.value;
  }
  if (!cond_iii.pass) {
    out["condition_iii"]["witness"] = cond_iii.witness;
    out["condition_iii"]["value"] = cond_iii.value;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_montecarlo(const std::string& config_path, int trials, std::uint64_t seed, int jobs,
                   bool allow_inadmissible, const std::string& per_trial_path) {
  const json config = load_json(config_path);
  BatchSpec spec{.space = Space::sphere,
                 .graph = parse_graph(config.at("graph")),
                 .gains = parse_gain(config.at("gain")),
                 .trials = trials,
                 .seed = seed,
                 .opts = parse_sim_options(config),
                 .jobs = jobs};
  const std::string space = config.value("space", "sphere");
  const GainFunction gain = parse_gain(config.at("gain"));
  if (space == "sphere") {
    spec.space = Space::sphere;
    spec.sphere_dim = config.value("dim", 2);
    require_admissible(gain, spec.sphere_dim, allow_inadmissible);
  } else if (space == "so3") {
    spec.space = Space::so3;
    const std::string protocol_name = config.value("protocol", "naive");
    if (protocol_name == "naive") {
      spec.so3_protocol = So3Protocol::naive;
    } else if (protocol_name == "composite") {
      spec.so3_protocol = So3Protocol::composite;
      require_admissible(gain, 2, allow_inadmissible);
    } else {
      throw ConfigError("protocol: expected \"naive\" or \"composite\"");
    }
    spec.n_bound = config.value("n_bound", spec.graph.num_nodes());
  } else {
    throw ConfigError("space: expected \"sphere\" or \"so3\"");
  }

  const TrialBatch batch = run_batch(spec);
  json echo = config;
  echo["trials"] = trials;
  echo["seed"] = seed;
  std::cout << batch_to_json(batch, echo).dump(2) << "\n";

  if (!per_trial_path.empty()) {
    std::ofstream out(per_trial_path);
    if (!out) throw ConfigError("cannot open per-trial output: " + per_trial_path);
    out << "trial,outcome\n";
    for (int i = 0; i < batch.trials; ++i) {
      out << i << "," << to_string(batch.per_trial[i]) << "\n";
    }
  }
  return batch.aborted > 0 ? 2 : 0;
}

int cmd_equilibria(const std::string& kind, int n, const std::string& gain_spec) {
  const auto named = make_equilibrium(kind, n);
  const GainFunction gain = parse_gain_string(gain_spec);
  const double residual = equilibrium_residual(named.config, named.graph, gain);
  const auto report = classify_equilibrium(named.config, named.graph, gain);
  json categories = json::array();
  for (auto c : categorize(named.config, named.graph, gain)) categories.push_back(to_string(c));
  json out{{"kind", named.kind},
           {"gain", gain.name()},
           {"config", sphere_config_to_json(named.config)},
           {"graph", graph_to_json(named.graph)},
           {"residual", residual},
           {"categories", categories},
           {"report", report_to_json(report)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spherecon: multi-agent consensus on the n-sphere and SO(3)"};
  app.require_subcommand(1);

  std::string config_path, traj_path, gain_spec = "constant:1", kind, per_trial_path;
  int dim = 2, n = -1, trials = 1000, jobs = 0;
  std::uint64_t seed = 0;
  bool allow_inadmissible = false;

  auto* simulate = app.add_subcommand("simulate", "One integration run; summary JSON on stdout");
  simulate->add_option("--config", config_path, "JSON configuration")->required();
  simulate->add_option("--traj", traj_path, "Trajectory CSV output (plus .json sidecar)");
  simulate->add_flag("--allow-inadmissible", allow_inadmissible,
                     "Accept gains that fail condition (iii), e.g. for S^1 studies");

  auto* spectrum = app.add_subcommand("spectrum", "Classify an equilibrium; report JSON on stdout");
  spectrum->add_option("--config", config_path, "JSON configuration")->required();

  auto* gains_check = app.add_subcommand("gains-check", "Conditions (i)/(iii) for a gain");
  gains_check->add_option("--gain", gain_spec, "Gain spec, e.g. constant:5 or power:1")->required();
  gains_check->add_option("--dim", dim, "Sphere dimension n")->required();

  auto* montecarlo = app.add_subcommand("montecarlo", "Batch of uniformly seeded trials");
  montecarlo->add_option("--config", config_path, "JSON configuration")->required();
  montecarlo->add_option("--trials", trials, "Number of trials")->required();
  montecarlo->add_option("--seed", seed, "Batch seed")->required();
  montecarlo->add_option("--jobs", jobs, "Worker threads (default: all cores)");
  montecarlo->add_option("--per-trial", per_trial_path, "Optional per-trial outcome CSV");
  montecarlo->add_flag("--allow-inadmissible", allow_inadmissible,
                       "Accept gains that fail condition (iii), e.g. for S^1 studies");

  auto* equilibria = app.add_subcommand("equilibria", "Emit a named equilibrium and its report");
  equilibria->add_option("--kind", kind,
                         "consensus | octahedron | tetrahedron | cube | icosahedron | "
                         "dodecahedron | great_circle_cycle")
      ->required();
  equilibria->add_option("--n", n, "Agent count where applicable");
  equilibria->add_option("--gain", gain_spec, "Gain spec (default constant:1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, traj_path, allow_inadmissible);
    if (spectrum->parsed()) return cmd_spectrum(config_path);
    if (gains_check->parsed()) return cmd_gains_check(gain_spec, dim);
    if (montecarlo->parsed()) {
      return cmd_montecarlo(config_path, trials, seed, jobs, allow_inadmissible, per_trial_path);
    }
    if (equilibria->parsed()) return cmd_equilibria(kind, n, gain_spec);
  } catch (const spherecon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
