#pragma once
#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "drsd/ofec.hpp"
#include "drsd/staircase.hpp"

namespace drsd {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Wilson score interval for a binomial proportion; well-behaved at zero
/// observed errors, which is where the acceptance comparisons live.
Interval wilson_interval(uint64_t successes, uint64_t trials, double z = 1.959963984540054);

struct BerCounters {
  uint64_t bits = 0;
  uint64_t bit_errors = 0;
  uint64_t frames = 0;
  uint64_t frame_errors = 0;

  void merge(const BerCounters& o) {
    bits += o.bits;
    bit_errors += o.bit_errors;
    frames += o.frames;
    frame_errors += o.frame_errors;
  }
  double ber() const { return bits ? static_cast<double>(bit_errors) / bits : 0.0; }
  double fer() const { return frames ? static_cast<double>(frame_errors) / frames : 0.0; }
  Interval ber_interval() const { return wilson_interval(bit_errors, bits); }
};

/// Monte-Carlo stopping bounds; zero disables a bound, at least one must be set.
struct StopRule {
  uint64_t max_bits = 0;
  uint64_t max_bit_errors = 0;
  uint64_t max_frame_errors = 0;

  bool has_bound() const { return max_bits || max_bit_errors || max_frame_errors; }
  bool reached(const BerCounters& c) const {
    return (max_bits && c.bits >= max_bits) || (max_bit_errors && c.bit_errors >= max_bit_errors) ||
           (max_frame_errors && c.frame_errors >= max_frame_errors);
  }
};

/// One independently seeded stream of frames. run_segment must be a pure
/// function of (its construction config, segment_index) so that totals do
/// not depend on how segments are spread over workers.
class SegmentSimulator {
 public:
  virtual ~SegmentSimulator() = default;
  virtual BerCounters run_segment(uint64_t segment_index) = 0;
};

using SimulatorFactory = std::function<std::unique_ptr<SegmentSimulator>()>;

/// Runs segments 0,1,2,... across `workers` threads, merging results in
/// segment order and stopping at the shortest prefix that satisfies the
/// stop rule. The merged total is byte-reproducible for a fixed factory
/// and independent of the worker count.
BerCounters run_point(const SimulatorFactory& factory, const StopRule& stop, int workers);

enum class CodeKind : uint8_t { kStaircase, kOfec };
enum class DecoderKind : uint8_t { kDrsd, kIbdd };
enum class SnrAxis : uint8_t { kEbn0, kEsn0 };

/// Full description of a simulation run; parsed from the flat key-value
/// config format (unknown keys are errors).
struct RunConfig {
  CodeKind code = CodeKind::kStaircase;
  DecoderKind decoder = DecoderKind::kDrsd;
  SnrAxis axis = SnrAxis::kEbn0;
  std::vector<double> snr_db;
  uint64_t seed = 1;
  int workers = 0;  // 0 = hardware concurrency
  StopRule stop{100'000'000, 1'000'000, 0};
  bool noise = true;

  DrsParams drs;
  bool anchors = true;
  bool spr = true;

  int sc_window = 7;
  int sc_iterations = 8;
  int sc_chain_blocks = 64;

  int ofec_iterations = 20;
  OfecAnchorSchedule ofec_anchor;
  int ofec_segment_pairs = 400;
  std::array<uint8_t, 16> ofec_pi{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};

  double rate() const;
  int rails() const;       // BPSK rails per transmitted channel bit group
  double amplitude() const;
  double to_esn0_db(double grid_value) const;
  double to_ebn0_db(double grid_value) const;
  void validate() const;
};

/// Parses the flat `key = value` text format; '#' starts a comment.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
/// Applies one key/value pair; shared by the parser, CLI overrides and tuner.
void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value);
/// Emits every field in the parseable format (round-trips through the parser).
std::string dump_run_config(const RunConfig& cfg);

struct PointSummary {
  double ebn0_db = 0.0;
  double esn0_db = 0.0;
  BerCounters counters;
};

std::unique_ptr<SegmentSimulator> make_segment_simulator(const RunConfig& cfg, double esn0_db);
PointSummary run_snr_point(const RunConfig& cfg, double grid_value);
std::vector<PointSummary> run_grid(const RunConfig& cfg, bool verbose = false);

/// One row of the semicolon result format.
struct ResultRow {
  double ebn0_db = 0.0;
  double esn0_db = 0.0;
  uint64_t frames = 0;
  uint64_t frame_errors = 0;
  double fer = 0.0;
  double ber = 0.0;
};

/// Semicolon CSV with the fixed header EbNo;EsNo;decodedFrame;FrameErr;FER;BER.
std::string format_results_csv(std::span<const PointSummary> points);
std::string format_result_rows(std::span<const ResultRow> rows);
std::vector<ResultRow> parse_results_csv(const std::string& text);
/// Companion manifest: revision, full config, per-point counters and 95% intervals.
std::string format_manifest(const RunConfig& cfg, std::span<const PointSummary> points,
                            const std::string& revision);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace drsd
