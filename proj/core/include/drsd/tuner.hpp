#pragma once
#include <map>
#include <string>
#include <vector>

#include "drsd/harness.hpp"

namespace drsd {

/// One tunable dimension; `key` is the run-config key the sampled value is
/// written to, so anything the config understands can be searched.
struct ParamSpec {
  enum class Type : uint8_t { kReal, kInt, kChoice };
  Type type = Type::kReal;
  std::string key;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::string> choices;
};

struct SearchSpace {
  std::vector<ParamSpec> params;
};

/// Space files share the flat key-value syntax:
///   param.erasure_threshold = real 0.05 0.5
///   param.ofec_ta_init      = int 0 8
///   param.quantizer         = choice equal_mass,capped
SearchSpace parse_search_space(const std::string& text);
SearchSpace load_search_space(const std::string& path);

using ParamAssignment = std::map<std::string, std::string>;
RunConfig apply_params(RunConfig base, const ParamAssignment& params);

struct ThresholdOptions {
  double target_ber = 1e-4;
  double snr_lo = 0.0;  // grid-axis units of the base config
  double snr_hi = 0.0;
  double tol_db = 0.02;
  StopRule eval_stop{100'000'000, 20'000, 0};  // short-run fidelity cap
};

struct ThresholdResult {
  double snr_db = 0.0;
  bool censored_low = false;   // BER already under target at snr_lo
  bool censored_high = false;  // BER never reaches target on the interval
  bool censored() const { return censored_low || censored_high; }
};

/// SNR at which the simulated BER crosses `target_ber`, bracketed by
/// bisection to tol_db; censored results sit at the interval edge.
ThresholdResult objective_snr_threshold(const RunConfig& base, const ThresholdOptions& opt,
                                        uint64_t eval_seed);

struct FixedSnrResult {
  double ber = 0.0;
  Interval ci;
  BerCounters counters;
};

FixedSnrResult objective_fixed_snr(const RunConfig& base, double snr_grid_value,
                                   const StopRule& stop, uint64_t eval_seed);

struct Trial {
  uint64_t index = 0;
  int phase = 1;  // 1: SNR-threshold objective, 2: fixed-SNR BER objective
  ParamAssignment params;
  double objective = 0.0;
  bool censored = false;
  double incumbent_objective = 0.0;  // best of this phase so far, this trial included
  bool is_incumbent = false;
};

struct SearchOptions {
  int budget = 16;  // total trials across both rounds
  uint64_t seed = 1;
  double round2_fraction = 0.25;
  double refine_fraction = 0.5;  // tail of round 1 samples near the incumbent
  double refine_scale = 0.15;    // relative range of local perturbations
  ThresholdOptions threshold;
  double fixed_snr = 0.0;  // round-2 operating point (grid-axis units)
  StopRule round2_stop{200'000'000, 20'000, 0};
};

struct SearchResult {
  ParamAssignment best_params;
  double best_threshold_db = 0.0;
  bool best_censored = false;
  double best_fixed_snr_ber = -1.0;  // negative when round 2 did not run
  std::vector<Trial> trials;
};

/// Two-round seeded search: random sampling plus local refinement on the
/// SNR-threshold objective, then coordinate perturbation of the incumbent
/// on the fixed-SNR BER objective. Deterministic for fixed
/// (space, budget, seed).
SearchResult tuner_search(const RunConfig& base, const SearchSpace& space,
                          const SearchOptions& opt);

/// Semicolon CSV of the trial log, one row per trial in index order.
std::string format_trial_log(const SearchSpace& space, const SearchResult& result);

}  // namespace drsd
