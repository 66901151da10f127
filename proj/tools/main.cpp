#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "drsd/harness.hpp"
#include "drsd/tuner.hpp"

namespace {

#ifndef DRSD_GIT_REVISION
#define DRSD_GIT_REVISION "unknown"
#endif

int cmd_run(const std::string& config_path, const std::string& snr_override,
            const std::string& seed_override, const std::string& workers_override,
            const std::string& out_path, bool quiet) {
  drsd::RunConfig cfg = drsd::load_run_config(config_path);
  if (!snr_override.empty()) drsd::set_config_key(cfg, "snr_db", snr_override);
  if (!seed_override.empty()) drsd::set_config_key(cfg, "seed", seed_override);
  if (!workers_override.empty()) drsd::set_config_key(cfg, "workers", workers_override);
  cfg.validate();

  auto points = drsd::run_grid(cfg, !quiet);
  std::string csv = drsd::format_results_csv(points);
  std::string manifest = drsd::format_manifest(cfg, points, DRSD_GIT_REVISION);
  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    drsd::write_text_file(out_path, csv);
    drsd::write_text_file(out_path + ".manifest.txt", manifest);
    if (!quiet) std::fprintf(stderr, "wrote %s and %s.manifest.txt\n", out_path.c_str(), out_path.c_str());
  }
  return 0;
}

void dump_ofec_layout(const std::string& path) {
  drsd::OfecLayout layout;
  std::string out = "# row block_col bit_row bit_col -> back(row,w) front(row,w)\n";
  for (int64_t row = 40; row < 42; ++row)
    for (int c = 0; c < drsd::OfecLayout::kBlockCols; ++c)
      for (int r = 0; r < drsd::OfecLayout::kBlockSide; ++r)
        for (int cc = 0; cc < drsd::OfecLayout::kBlockSide; ++cc) {
          auto roles = layout.bit_roles(row, drsd::OfecLayout::bit_offset(c, r, cc));
          char line[128];
          std::snprintf(line, sizeof line, "%lld %d %d %d -> (%lld,%d) (%lld,%d)\n",
                        static_cast<long long>(row), c, r, cc,
                        static_cast<long long>(roles.back_row), roles.back_w,
                        static_cast<long long>(roles.front_row), roles.front_w);
          out += line;
        }
  drsd::write_text_file(path, out);
}

int cmd_selftest(const std::string& layout_dump) {
  using namespace drsd;
  int failures = 0;
  auto report = [&](const char* name, bool ok) {
    std::printf("%-34s %s\n", name, ok ? "PASS" : "FAIL");
    if (!ok) ++failures;
  };

  {  // field + component codecs round trip
    bool ok = true;
    BchCode sc = StaircaseCode::make_component();
    BchCode of = make_ofec_component();
    Rng rng(1);
    for (const BchCode* code : {&sc, &of}) {
      std::vector<uint8_t> info(code->k());
      for (int trial = 0; trial < 10 && ok; ++trial) {
        for (auto& b : info) b = rng.next_bit();
        auto cw = code->encode(info);
        ok = ok && code->decode(cw).status == BddOutcome::Status::kCodeword;
        auto noisy = cw;
        for (int e = 0; e < code->t(); ++e) noisy[rng.next_below(code->n())] ^= 1;
        ok = ok && code->decode(noisy).ok();
      }
    }
    report("component codecs", ok);
  }
  {  // quantizer masses
    MagnitudeDistribution dist(ChannelSpec::from_esn0_db(3.0, 1.0));
    auto t = equal_mass_thresholds(0, 31, dist);
    bool ok = t[0] == 0.0;
    for (int k = 0; k + 1 < 32; ++k)
      ok = ok && std::abs(dist.cdf(t[k + 1]) - dist.cdf(t[k]) - 1.0 / 32) < 1e-6;
    report("equal-mass quantizer", ok);
  }
  {  // layout invariants over a short segment
    OfecLayout layout;
    bool ok = true;
    for (int64_t row = 30; row < 34 && ok; ++row)
      for (int off = 0; off < OfecLayout::kRowBits && ok; ++off) {
        auto roles = layout.bit_roles(row, off);
        int64_t gap = roles.front_row - row;
        ok = gap >= OfecLayout::kGapMin && gap <= OfecLayout::kGapMax;
        auto ref = layout.codeword_bit(roles.back_row, roles.back_w, 128 + off % 128);
        (void)ref;
      }
    report("structure gaps", ok);
  }
  {  // encoder validity
    BchCode code = make_ofec_component();
    OfecLayout layout;
    OfecEncoder enc(code, layout);
    Rng rng(2);
    std::vector<uint8_t> info(OfecLayout::kInfoPerRowPair);
    std::vector<uint8_t> out(2 * OfecLayout::kRowBits);
    std::vector<std::vector<uint8_t>> rows;
    for (int p = 0; p < 16; ++p) {
      for (auto& b : info) b = rng.next_bit();
      enc.encode_row_pair(info, out);
      rows.emplace_back(out.begin(), out.begin() + OfecLayout::kRowBits);
      rows.emplace_back(out.begin() + OfecLayout::kRowBits, out.end());
    }
    bool ok = true;
    std::vector<uint8_t> word(256);
    for (int w = 0; w < 16 && ok; ++w) {
      for (int p = 0; p < 256; ++p) {
        auto ref = layout.codeword_bit(24, w, p);
        word[p] = rows[ref.row][ref.offset];
      }
      ok = code.decode(word).status == BddOutcome::Status::kCodeword;
    }
    report("streaming encoder", ok);
  }
  {  // deterministic replay
    RunConfig cfg;
    cfg.snr_db = {4.6};
    cfg.sc_chain_blocks = 4;
    cfg.stop = {2 * 4 * 13081ull, 0, 0};
    cfg.workers = 2;
    auto a = run_snr_point(cfg, 4.6);
    auto b = run_snr_point(cfg, 4.6);
    report("deterministic replay",
           a.counters.bit_errors == b.counters.bit_errors && a.counters.bits == b.counters.bits);
  }
  if (!layout_dump.empty()) {
    dump_ofec_layout(layout_dump);
    std::printf("layout table written to %s\n", layout_dump.c_str());
  }
  return failures == 0 ? 0 : 1;
}

int cmd_tune(const std::string& config_path, const std::string& space_path, int budget,
             uint64_t seed, double snr_lo, double snr_hi, double fixed_snr,
             double eval_bits, double eval_errors, const std::string& out_path) {
  drsd::RunConfig base = drsd::load_run_config(config_path);
  drsd::SearchSpace space = drsd::load_search_space(space_path);
  drsd::SearchOptions opt;
  opt.budget = budget;
  opt.seed = seed;
  opt.threshold.snr_lo = snr_lo;
  opt.threshold.snr_hi = snr_hi;
  if (eval_bits > 0) opt.threshold.eval_stop.max_bits = static_cast<uint64_t>(eval_bits);
  if (eval_errors > 0) opt.threshold.eval_stop.max_bit_errors = static_cast<uint64_t>(eval_errors);
  opt.round2_stop = opt.threshold.eval_stop;
  opt.round2_stop.max_bits *= 4;
  opt.fixed_snr = fixed_snr != 0.0 ? fixed_snr : 0.5 * (snr_lo + snr_hi);
  auto result = drsd::tuner_search(base, space, opt);
  std::string log = drsd::format_trial_log(space, result);
  if (out_path.empty())
    std::fputs(log.c_str(), stdout);
  else
    drsd::write_text_file(out_path, log);
  std::fprintf(stderr, "best threshold: %.4g dB%s\n", result.best_threshold_db,
               result.best_censored ? " (censored)" : "");
  for (const auto& [k, v] : result.best_params)
    std::fprintf(stderr, "  %s = %s\n", k.c_str(), v.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo simulator for soft-aided product-like FEC decoding"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a BER/FER sweep from a config file");
  std::string config_path, snr, seed, workers, out;
  bool quiet = false;
  run->add_option("--config", config_path, "run config file")->required()->check(CLI::ExistingFile);
  run->add_option("--snr", snr, "override snr_db grid, comma separated");
  run->add_option("--seed", seed, "override seed");
  run->add_option("--workers", workers, "override worker count");
  run->add_option("--out", out, "output CSV path (manifest written alongside)");
  run->add_flag("--quiet", quiet, "suppress progress output");

  auto* selftest = app.add_subcommand("selftest", "codec and layout sanity checks");
  std::string layout_dump;
  selftest->add_option("--ofec-layout-dump", layout_dump, "write the bit-to-codeword table");

  auto* tune = app.add_subcommand("tune", "hyperparameter search");
  std::string space_path, tune_out;
  int budget = 16;
  uint64_t tseed = 1;
  double snr_lo = 0.0, snr_hi = 0.0, fixed_snr = 0.0, eval_bits = 0.0, eval_errors = 0.0;
  tune->add_option("--config", config_path, "base run config")->required()->check(CLI::ExistingFile);
  tune->add_option("--space", space_path, "search space file")->required()->check(CLI::ExistingFile);
  tune->add_option("--budget", budget, "trial budget");
  tune->add_option("--seed", tseed, "search seed");
  tune->add_option("--snr-lo", snr_lo, "threshold search lower SNR (grid axis)")->required();
  tune->add_option("--snr-hi", snr_hi, "threshold search upper SNR (grid axis)")->required();
  tune->add_option("--fixed-snr", fixed_snr, "round-2 operating SNR (grid axis)");
  tune->add_option("--eval-bits", eval_bits, "bit budget per objective evaluation");
  tune->add_option("--eval-errors", eval_errors, "error budget per objective evaluation");
  tune->add_option("--out", tune_out, "trial log path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, snr, seed, workers, out, quiet);
    if (*selftest) return cmd_selftest(layout_dump);
    if (*tune) return cmd_tune(config_path, space_path, budget, tseed, snr_lo, snr_hi, fixed_snr,
                    eval_bits, eval_errors, tune_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
