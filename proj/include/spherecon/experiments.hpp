#pragma once

#include <spherecon/simulation.hpp>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace spherecon {

/// Counter-based split of the batch seed: trials are independent streams
/// regardless of scheduling order, so parallel runs reproduce serial ones.
inline std::uint64_t trial_seed(std::uint64_t batch_seed, std::uint64_t index) {
  std::uint64_t z = batch_seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

enum class Space { sphere, so3 };

struct BatchSpec {
  Space space = Space::sphere;
  int sphere_dim = 2;  // n for Space::sphere
  So3Protocol so3_protocol = So3Protocol::naive;
  int n_bound = 0;  // circle protocol bound for the composite protocol; 0 = agent count
  Graph graph;
  GainTable gains;
  int trials = 1000;
  std::uint64_t seed = 0;
  SimOptions opts;
  int jobs = 0;  // 0 = hardware concurrency
};

struct FailureDigest {
  int trial = 0;
  double terminal_residual = 0.0;
  double max_edge_s = 0.0;
  double min_edge_s = 0.0;
  double V_final = 0.0;
};

struct TrialBatch {
  int trials = 0;
  std::uint64_t seed = 0;
  int consensus = 0;
  int failures = 0;  // non-consensus equilibria
  int timeouts = 0;
  int aborted = 0;  // non-finite states; any abort fails the batch
  double failure_fraction = 0.0;
  bool inconclusive = false;  // more than 1% timeouts
  double wall_time_s = 0.0;
  std::vector<Outcome> per_trial;
  std::vector<FailureDigest> failure_digests;
};

/// Runs `spec.trials` i.i.d. uniformly seeded integrations and tallies the
/// outcomes. Failure means convergence to a non-consensus equilibrium;
/// timeouts are reported separately and never counted as failures.
inline TrialBatch run_batch(const BatchSpec& spec) {
  if (!spec.graph.is_connected()) throw std::invalid_argument("run_batch: graph must be connected");
  if (spec.trials < 1) throw std::invalid_argument("run_batch: need at least one trial");
  const int N = spec.graph.num_nodes();
  const int jobs = spec.jobs > 0
                       ? spec.jobs
                       : std::max(1u, std::thread::hardware_concurrency());

  TrialBatch batch;
  batch.trials = spec.trials;
  batch.seed = spec.seed;
  batch.per_trial.assign(spec.trials, Outcome::timeout);
  std::vector<std::optional<FailureDigest>> digests(spec.trials);
  std::vector<char> abort_flags(spec.trials, 0);

  const auto t0 = std::chrono::steady_clock::now();
  std::atomic<int> next{0};

  auto worker = [&]() {
    while (true) {
      const int trial = next.fetch_add(1);
      if (trial >= spec.trials) return;
      Rng rng(trial_seed(spec.seed, static_cast<std::uint64_t>(trial)));
      try {
        if (spec.space == Space::sphere) {
          std::vector<UnitVector> states;
          states.reserve(N);
          for (int i = 0; i < N; ++i) states.push_back(sample_unit_sphere(spec.sphere_dim, rng));
          const auto result =
              integrate_sphere(SphereConfig(std::move(states)), spec.graph, spec.gains, spec.opts);
          batch.per_trial[trial] = result.outcome;
          if (result.outcome == Outcome::non_consensus_equilibrium) {
            double min_s = 2.0;
            for (const auto& [i, j] : spec.graph.edges()) {
              min_s = std::min(min_s, geodesic_and_chordal(result.final_state[i],
                                                           result.final_state[j]).s);
            }
            digests[trial] = FailureDigest{trial, result.terminal_residual, result.max_edge_s,
                                           min_s, result.V_final};
          }
        } else {
          std::vector<Rotation3> states;
          states.reserve(N);
          for (int i = 0; i < N; ++i) states.push_back(sample_uniform_rotation(rng));
          const CircleProtocol circle{spec.n_bound > 0 ? spec.n_bound : N};
          const auto result = integrate_so3(RotationConfig(std::move(states)), spec.graph,
                                            spec.gains, spec.so3_protocol, circle, spec.opts);
          batch.per_trial[trial] = result.outcome;
          if (result.outcome == Outcome::non_consensus_equilibrium) {
            double min_s = 4.0;
            for (const auto& [i, j] : spec.graph.edges()) {
              min_s = std::min(min_s, kernel::so3_chordal(result.final_state[i].matrix(),
                                                          result.final_state[j].matrix()));
            }
            digests[trial] = FailureDigest{trial, result.terminal_residual, result.max_edge_s,
                                           min_s, result.V_final};
          }
        }
      } catch (const NumericalError&) {
        abort_flags[trial] = 1;
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (int trial = 0; trial < spec.trials; ++trial) {
    if (abort_flags[trial]) {
      ++batch.aborted;
      continue;
    }
    switch (batch.per_trial[trial]) {
      case Outcome::consensus: ++batch.consensus; break;
      case Outcome::non_consensus_equilibrium: ++batch.failures; break;
      case Outcome::timeout: ++batch.timeouts; break;
    }
    if (digests[trial]) batch.failure_digests.push_back(*digests[trial]);
  }
  batch.failure_fraction = static_cast<double>(batch.failures) / spec.trials;
  batch.inconclusive = batch.timeouts > spec.trials / 100;
  batch.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return batch;
}

using TangentDirection = std::vector<TangentVector>;

/// Moves every agent by magnitude * v_i and renormalizes (the projection
/// retraction on the sphere).
inline SphereConfig retract(const SphereConfig& cfg, const TangentDirection& direction,
                            double magnitude) {
  if (static_cast<int>(direction.size()) != cfg.size()) {
    throw std::invalid_argument("retract: direction/config size mismatch");
  }
  std::vector<UnitVector> states;
  states.reserve(cfg.size());
  for (int i = 0; i < cfg.size(); ++i) {
    states.push_back(
        UnitVector::normalized(cfg[i].coords() + magnitude * direction[i].coords()));
  }
  return SphereConfig(std::move(states));
}

/// One integration per direction, each starting from the retracted
/// perturbation of the given equilibrium.
inline std::vector<SphereSimResult> perturbation_study(const SphereConfig& eq, const Graph& graph,
                                                       const GainTable& gains,
                                                       const std::vector<TangentDirection>& dirs,
                                                       double magnitude,
                                                       const SimOptions& opts = {}) {
  std::vector<SphereSimResult> results;
  results.reserve(dirs.size());
  for (const auto& direction : dirs) {
    results.push_back(integrate_sphere(retract(eq, direction, magnitude), graph, gains, opts));
  }
  return results;
}

/// Integrates the negated flow on S^2 over a cycle graph with constant gains;
/// from almost every start the terminal configuration has all edge chordal
/// values equal to the maximin value for that agent count.
inline SphereSimResult backward_flow(const SphereConfig& cfg0, const Graph& graph,
                                     const GainTable& gains, SimOptions opts = {}) {
  if (cfg0.dim() != 2) throw std::invalid_argument("backward_flow: states must lie on S^2");
  for (int i = 0; i < graph.num_nodes(); ++i) {
    if (graph.degree(i) != 2) throw std::invalid_argument("backward_flow: graph must be a cycle");
  }
  if (!graph.is_connected()) throw std::invalid_argument("backward_flow: graph must be a cycle");
  for (int id = 0; id < gains.size(); ++id) {
    if (gains[id].kind() != GainFunction::Kind::constant) {
      throw std::invalid_argument("backward_flow: gains must be constant");
    }
  }
  opts.backward = true;
  return integrate_sphere(cfg0, graph, gains, opts);
}

}  // namespace spherecon
