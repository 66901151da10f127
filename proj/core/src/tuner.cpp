#include "drsd/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "drsd/util.hpp"

namespace drsd {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string format_value(const ParamSpec& p, double v) {
  char buf[40];
  if (p.type == ParamSpec::Type::kInt)
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(std::llround(v)));
  else
    std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

SearchSpace parse_search_space(const std::string& text) {
  SearchSpace space;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos || line.rfind("param.", 0) != 0)
      throw std::invalid_argument("search space: line " + std::to_string(lineno) +
                                  " must be param.<key> = <spec>");
    ParamSpec p;
    p.key = trim(line.substr(6, eq - 6));
    std::istringstream spec(trim(line.substr(eq + 1)));
    std::string kind;
    spec >> kind;
    if (kind == "real" || kind == "int") {
      p.type = kind == "real" ? ParamSpec::Type::kReal : ParamSpec::Type::kInt;
      if (!(spec >> p.lo >> p.hi) || p.lo > p.hi)
        throw std::invalid_argument("search space: bad range on line " + std::to_string(lineno));
    } else if (kind == "choice") {
      p.type = ParamSpec::Type::kChoice;
      std::string rest;
      std::getline(spec, rest);
      std::istringstream items(rest);
      std::string item;
      while (std::getline(items, item, ',')) {
        item = trim(item);
        if (!item.empty()) p.choices.push_back(item);
      }
      if (p.choices.empty())
        throw std::invalid_argument("search space: empty choice list on line " +
                                    std::to_string(lineno));
    } else {
      throw std::invalid_argument("search space: unknown kind '" + kind + "'");
    }
    space.params.push_back(std::move(p));
  }
  if (space.params.empty()) throw std::invalid_argument("search space: no parameters");
  return space;
}

SearchSpace load_search_space(const std::string& path) {
  return parse_search_space(read_text_file(path));
}

RunConfig apply_params(RunConfig base, const ParamAssignment& params) {
  for (const auto& [key, value] : params) set_config_key(base, key, value);
  return base;
}

ThresholdResult objective_snr_threshold(const RunConfig& base, const ThresholdOptions& opt,
                                        uint64_t eval_seed) {
  if (!(opt.snr_hi > opt.snr_lo)) throw std::invalid_argument("objective_snr_threshold: bad interval");
  RunConfig cfg = base;
  cfg.stop = opt.eval_stop;
  int evals = 0;
  auto ber_at = [&](double snr) {
    cfg.seed = derive_seed(eval_seed, static_cast<uint64_t>(evals++), 0xb15ec7);
    return run_snr_point(cfg, snr).counters.ber();
  };
  ThresholdResult res;
  if (ber_at(opt.snr_hi) > opt.target_ber) {
    res.snr_db = opt.snr_hi;
    res.censored_high = true;
    return res;
  }
  if (ber_at(opt.snr_lo) < opt.target_ber) {
    res.snr_db = opt.snr_lo;
    res.censored_low = true;
    return res;
  }
  double lo = opt.snr_lo, hi = opt.snr_hi;
  while (hi - lo > opt.tol_db) {
    double mid = 0.5 * (lo + hi);
    (ber_at(mid) >= opt.target_ber ? lo : hi) = mid;
  }
  res.snr_db = 0.5 * (lo + hi);
  return res;
}

FixedSnrResult objective_fixed_snr(const RunConfig& base, double snr_grid_value,
                                   const StopRule& stop, uint64_t eval_seed) {
  RunConfig cfg = base;
  cfg.stop = stop;
  cfg.seed = eval_seed;
  FixedSnrResult res;
  auto point = run_snr_point(cfg, snr_grid_value);
  res.counters = point.counters;
  res.ber = point.counters.ber();
  res.ci = point.counters.ber_interval();
  return res;
}

namespace {

class Sampler {
 public:
  Sampler(const SearchSpace& space, const RunConfig& base, uint64_t seed)
      : space_(space), base_(base), rng_(seed) {}

  ParamAssignment uniform() {
    return rejection([&] {
      ParamAssignment a;
      for (const auto& p : space_.params) a[p.key] = draw_uniform(p);
      return a;
    });
  }

  ParamAssignment near(const ParamAssignment& center, double scale) {
    return rejection([&] {
      ParamAssignment a = center;
      for (const auto& p : space_.params) a[p.key] = draw_near(p, center.at(p.key), scale);
      return a;
    });
  }

  ParamAssignment perturb_one(const ParamAssignment& center, double scale) {
    return rejection([&] {
      ParamAssignment a = center;
      const auto& p = space_.params[rng_.next_below(space_.params.size())];
      a[p.key] = draw_near(p, center.at(p.key), scale);
      return a;
    });
  }

 private:
  template <typename F>
  ParamAssignment rejection(F&& draw) {
    for (int attempt = 0; attempt < 256; ++attempt) {
      ParamAssignment a = draw();
      try {
        RunConfig cfg = apply_params(base_, a);
        cfg.validate();
        return a;
      } catch (const std::invalid_argument&) {
        // invalid combination, resample
      }
    }
    throw std::runtime_error("tuner: could not sample a valid configuration");
  }

  std::string draw_uniform(const ParamSpec& p) {
    switch (p.type) {
      case ParamSpec::Type::kReal:
        return format_value(p, p.lo + (p.hi - p.lo) * rng_.next_double());
      case ParamSpec::Type::kInt:
        return format_value(p, static_cast<double>(p.lo + static_cast<double>(rng_.next_below(
                                                              static_cast<uint64_t>(p.hi - p.lo + 1)))));
      case ParamSpec::Type::kChoice:
        return p.choices[rng_.next_below(p.choices.size())];
    }
    return "";
  }

  std::string draw_near(const ParamSpec& p, const std::string& center, double scale) {
    if (p.type == ParamSpec::Type::kChoice) {
      // keep with high probability, otherwise resample
      if (rng_.next_double() < 0.7) return center;
      return p.choices[rng_.next_below(p.choices.size())];
    }
    double c = std::stod(center);
    double width = (p.hi - p.lo) * scale;
    if (p.type == ParamSpec::Type::kInt) width = std::max(width, 1.0);
    double v = std::clamp(c + width * rng_.next_normal(), p.lo, p.hi);
    return format_value(p, v);
  }

  const SearchSpace& space_;
  const RunConfig& base_;
  Rng rng_;
};

}  // namespace

SearchResult tuner_search(const RunConfig& base, const SearchSpace& space,
                          const SearchOptions& opt) {
  if (opt.budget < 1) throw std::invalid_argument("tuner_search: budget must be >= 1");
  Sampler sampler(space, base, opt.seed);
  SearchResult res;

  int round2 = opt.budget >= 4 ? static_cast<int>(std::lround(opt.budget * opt.round2_fraction)) : 0;
  int round1 = opt.budget - round2;
  const int refine_start = std::max(1, static_cast<int>(std::lround(round1 * opt.refine_fraction)));

  double best_obj = 0.0;
  bool have_incumbent = false;
  for (int t = 0; t < round1; ++t) {
    Trial trial;
    trial.index = res.trials.size();
    trial.phase = 1;
    trial.params = (have_incumbent && t >= refine_start)
                       ? sampler.near(res.best_params, opt.refine_scale)
                       : sampler.uniform();
    RunConfig cfg = apply_params(base, trial.params);
    auto thr = objective_snr_threshold(cfg, opt.threshold, derive_seed(opt.seed, trial.index, 1));
    trial.censored = thr.censored();
    // A high-censored run never reached the target BER; rank it last.
    trial.objective = thr.censored_high ? opt.threshold.snr_hi + 1.0 : thr.snr_db;
    if (!have_incumbent || trial.objective < best_obj) {
      best_obj = trial.objective;
      res.best_params = trial.params;
      res.best_threshold_db = thr.snr_db;
      res.best_censored = thr.censored();
      trial.is_incumbent = true;
      have_incumbent = true;
    }
    trial.incumbent_objective = best_obj;
    res.trials.push_back(std::move(trial));
  }

  if (round2 > 0) {
    // Fine-tune the incumbent at a fixed SNR; the first round-2 trial
    // scores the incumbent itself.
    double best_ber = 0.0;
    for (int t = 0; t < round2; ++t) {
      Trial trial;
      trial.index = res.trials.size();
      trial.phase = 2;
      trial.params = t == 0 ? res.best_params : sampler.perturb_one(res.best_params, opt.refine_scale);
      RunConfig cfg = apply_params(base, trial.params);
      auto fx = objective_fixed_snr(cfg, opt.fixed_snr, opt.round2_stop,
                                    derive_seed(opt.seed, trial.index, 2));
      trial.objective = fx.ber;
      if (t == 0 || fx.ber < best_ber) {
        best_ber = fx.ber;
        res.best_params = trial.params;
        res.best_fixed_snr_ber = fx.ber;
        trial.is_incumbent = true;
      }
      trial.incumbent_objective = best_ber;
      res.trials.push_back(std::move(trial));
    }
  }
  return res;
}

std::string format_trial_log(const SearchSpace& space, const SearchResult& result) {
  std::ostringstream out;
  out << "trial;phase;objective;censored;incumbent";
  for (const auto& p : space.params) out << ";" << p.key;
  out << "\n";
  for (const auto& t : result.trials) {
    char obj[40];
    std::snprintf(obj, sizeof obj, "%.6g", t.objective);
    out << t.index << ";" << t.phase << ";" << obj << ";" << (t.censored ? 1 : 0) << ";"
        << (t.is_incumbent ? 1 : 0);
    for (const auto& p : space.params) out << ";" << t.params.at(p.key);
    out << "\n";
  }
  return out.str();
}

}  // namespace drsd
