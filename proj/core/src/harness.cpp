#include "drsd/harness.hpp"

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace drsd {

Interval wilson_interval(uint64_t successes, uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  Interval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) iv.lo = 0.0;
  if (successes == trials) iv.hi = 1.0;
  return iv;
}

BerCounters run_point(const SimulatorFactory& factory, const StopRule& stop, int workers) {
  if (!stop.has_bound()) throw std::invalid_argument("run_point: stop rule has no bound");
  if (workers < 1) workers = 1;

  std::mutex mu;
  std::map<uint64_t, BerCounters> pending;
  uint64_t merge_next = 0;
  BerCounters total;
  bool stopped = false;
  std::atomic<uint64_t> next{0};

  auto work = [&]() {
    auto sim = factory();
    for (;;) {
      {
        std::lock_guard<std::mutex> g(mu);
        if (stopped) return;
      }
      const uint64_t idx = next.fetch_add(1);
      BerCounters r = sim->run_segment(idx);
      std::lock_guard<std::mutex> g(mu);
      if (stopped) return;
      pending.emplace(idx, r);
      while (!pending.empty() && pending.begin()->first == merge_next) {
        total.merge(pending.begin()->second);
        pending.erase(pending.begin());
        ++merge_next;
        if (stop.reached(total)) {
          stopped = true;
          return;
        }
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return total;
}

double RunConfig::rate() const {
  return code == CodeKind::kStaircase ? StaircaseCode::kRate
                                      : static_cast<double>(OfecLayout::kInfoPerRowPair) /
                                            OfecLayout::kCodedPerRowPair;
}

int RunConfig::rails() const { return code == CodeKind::kStaircase ? 1 : 2; }

double RunConfig::amplitude() const {
  return code == CodeKind::kStaircase ? 1.0 : 1.0 / std::sqrt(2.0);
}

double RunConfig::to_esn0_db(double grid_value) const {
  return axis == SnrAxis::kEsn0 ? grid_value : ebn0_to_esn0_db(grid_value, rate(), rails());
}

double RunConfig::to_ebn0_db(double grid_value) const {
  return axis == SnrAxis::kEbn0 ? grid_value : esn0_to_ebn0_db(grid_value, rate(), rails());
}

void RunConfig::validate() const {
  if (snr_db.empty()) throw std::invalid_argument("RunConfig: empty SNR grid");
  if (!stop.has_bound()) throw std::invalid_argument("RunConfig: stop rule needs a bound");
  drs.validate();
  if (sc_window < 2) throw std::invalid_argument("RunConfig: sc_window must be >= 2");
  if (sc_iterations < 1 || sc_chain_blocks < 1 || ofec_segment_pairs < 1 || ofec_iterations < 1)
    throw std::invalid_argument("RunConfig: iteration/segment counts must be positive");
  ofec_anchor.validate(ofec_iterations);
}

namespace {

class StaircaseSegmentSim final : public SegmentSimulator {
 public:
  StaircaseSegmentSim(const RunConfig& cfg, double esn0_db)
      : cfg_(cfg),
        spec_(ChannelSpec::from_esn0_db(esn0_db, cfg.amplitude())),
        dist_(spec_),
        quant_(cfg.drs, dist_),
        code_(StaircaseCode::make_component()),
        enc_(code_),
        dec_(code_, decoder_params(cfg), quant_, 0) {
    sent_.assign(static_cast<size_t>(cfg.sc_window) + 1,
                 std::vector<uint8_t>(StaircaseCode::kBlockBits));
    info_.resize(StaircaseCode::kInfoBitsPerBlock);
    block_.resize(StaircaseCode::kBlockBits);
    hard_.resize(StaircaseCode::kBlockBits);
    mag_.resize(StaircaseCode::kBlockBits);
  }

  static StaircaseParams decoder_params(const RunConfig& cfg) {
    StaircaseParams p;
    p.window = cfg.sc_window;
    p.iterations = cfg.sc_iterations;
    p.drs = cfg.drs;
    p.anchors_enabled = cfg.anchors;
    p.ibdd = cfg.decoder == DecoderKind::kIbdd;
    return p;
  }

  BerCounters run_segment(uint64_t idx) override {
    BerCounters c;
    Rng data(derive_seed(cfg_.seed, idx, 1));
    BiAwgnChannel chan(spec_, derive_seed(cfg_.seed, idx, 2), cfg_.noise);
    enc_.reset();
    dec_.reset(derive_seed(cfg_.seed, idx, 3));
    constexpr int kM = StaircaseCode::kBlockSize;
    constexpr int kIc = StaircaseCode::kInfoCols;
    const int n_real = cfg_.sc_chain_blocks;
    const int total = n_real + cfg_.sc_window - 1;  // zero-info tail flushes the window
    for (int b = 1; b <= total; ++b) {
      if (b <= n_real)
        for (auto& x : info_) x = data.next_bit();
      else
        std::fill(info_.begin(), info_.end(), 0);
      enc_.encode_block(info_, block_);
      sent_[b % sent_.size()] = block_;
      chan.transmit(block_, hard_, mag_);
      auto out = dec_.push_block(mag_, hard_);
      if (out.empty()) continue;
      const int64_t e = dec_.blocks_pushed() - cfg_.sc_window;
      if (e < 1 || e > n_real) continue;
      const auto& tx = sent_[e % sent_.size()];
      uint64_t errs = 0;
      for (int r = 0; r < kM; ++r) {
        const uint8_t* a = out.data() + r * kM;
        const uint8_t* t = tx.data() + r * kM;
        for (int q = 0; q < kIc; ++q) errs += a[q] != t[q];
      }
      c.bits += StaircaseCode::kInfoBitsPerBlock;
      c.bit_errors += errs;
      c.frames += 1;
      c.frame_errors += errs ? 1 : 0;
    }
    return c;
  }

 private:
  RunConfig cfg_;
  ChannelSpec spec_;
  MagnitudeDistribution dist_;
  DrsQuantizer quant_;
  BchCode code_;
  StaircaseEncoder enc_;
  StaircaseWindowDecoder dec_;
  std::vector<std::vector<uint8_t>> sent_;
  std::vector<uint8_t> info_, block_, hard_;
  std::vector<float> mag_;
};

class OfecSegmentSim final : public SegmentSimulator {
 public:
  OfecSegmentSim(const RunConfig& cfg, double esn0_db)
      : cfg_(cfg),
        spec_(ChannelSpec::from_esn0_db(esn0_db, cfg.amplitude())),
        dist_(spec_),
        quant_(cfg.drs, dist_),
        code_(make_ofec_component()),
        layout_(cfg.ofec_pi),
        enc_(code_, layout_),
        dec_(code_, layout_, decoder_params(cfg), quant_, 0) {
    const int ring_rows = dec_.window_rows() + 4;
    sent_.assign(static_cast<size_t>(ring_rows), std::vector<uint8_t>(OfecLayout::kRowBits));
    info_.resize(OfecLayout::kInfoPerRowPair);
    coded_.resize(2 * OfecLayout::kRowBits);
    hard_.resize(coded_.size());
    mag_.resize(coded_.size());
  }

  static OfecParams decoder_params(const RunConfig& cfg) {
    OfecParams p;
    p.iterations = cfg.ofec_iterations;
    p.anchor = cfg.ofec_anchor;
    p.drs = cfg.drs;
    p.anchors_enabled = cfg.anchors;
    p.ibdd = cfg.decoder == DecoderKind::kIbdd;
    p.spr = cfg.spr;
    return p;
  }

  // Information positions within a row: back offset 16*C + c below 111.
  static const std::array<uint8_t, OfecLayout::kRowBits>& info_mask() {
    static const auto mask = [] {
      std::array<uint8_t, OfecLayout::kRowBits> m{};
      for (int col = 0; col < OfecLayout::kBlockCols; ++col)
        for (int r = 0; r < OfecLayout::kBlockSide; ++r)
          for (int cc = 0; cc < OfecLayout::kBlockSide; ++cc)
            m[OfecLayout::bit_offset(col, r, cc)] =
                16 * col + cc < OfecLayout::kInfoPerCodeword ? 1 : 0;
      return m;
    }();
    return mask;
  }

  BerCounters run_segment(uint64_t idx) override {
    BerCounters c;
    Rng data(derive_seed(cfg_.seed, idx, 1));
    BiAwgnChannel chan(spec_, derive_seed(cfg_.seed, idx, 2), cfg_.noise);
    enc_.reset();
    dec_.reset(derive_seed(cfg_.seed, idx, 3));
    const auto& mask = info_mask();
    const int real_pairs = cfg_.ofec_segment_pairs;
    const int total = real_pairs + dec_.window_rows() / 2;  // zero-info flush
    const int64_t last_real_row = 2 * static_cast<int64_t>(real_pairs) - 1;
    for (int p = 0; p < total; ++p) {
      if (p < real_pairs)
        for (auto& x : info_) x = data.next_bit();
      else
        std::fill(info_.begin(), info_.end(), 0);
      enc_.encode_row_pair(info_, coded_);
      sent_[(2 * p) % sent_.size()].assign(coded_.begin(), coded_.begin() + OfecLayout::kRowBits);
      sent_[(2 * p + 1) % sent_.size()].assign(coded_.begin() + OfecLayout::kRowBits, coded_.end());
      chan.transmit(coded_, hard_, mag_);
      auto out = dec_.push_row_pair(mag_, hard_);
      if (out.empty()) continue;
      for (int h = 0; h < 2; ++h) {
        const int64_t row = dec_.emitted_rows_begin() + h;
        if (row < 0 || row > last_real_row) continue;
        const uint8_t* a = out.data() + static_cast<size_t>(h) * OfecLayout::kRowBits;
        const uint8_t* t = sent_[row % sent_.size()].data();
        uint64_t errs = 0;
        for (int off = 0; off < OfecLayout::kRowBits; ++off)
          if (mask[off]) errs += a[off] != t[off];
        c.bits += OfecLayout::kInfoPerRowPair / 2;
        c.bit_errors += errs;
        // Frame granularity: one emitted block-row pair.
        if (h == 1 || row == last_real_row) {
          c.frames += 1;
          c.frame_errors += (errs || pending_errs_) ? 1 : 0;
          pending_errs_ = 0;
        } else {
          pending_errs_ = errs;
        }
      }
    }
    return c;
  }

 private:
  RunConfig cfg_;
  ChannelSpec spec_;
  MagnitudeDistribution dist_;
  DrsQuantizer quant_;
  BchCode code_;
  OfecLayout layout_;
  OfecEncoder enc_;
  OfecWindowDecoder dec_;
  std::vector<std::vector<uint8_t>> sent_;
  std::vector<uint8_t> info_, coded_, hard_;
  std::vector<float> mag_;
  uint64_t pending_errs_ = 0;
};

}  // namespace

std::unique_ptr<SegmentSimulator> make_segment_simulator(const RunConfig& cfg, double esn0_db) {
  if (cfg.code == CodeKind::kStaircase)
    return std::make_unique<StaircaseSegmentSim>(cfg, esn0_db);
  return std::make_unique<OfecSegmentSim>(cfg, esn0_db);
}

PointSummary run_snr_point(const RunConfig& cfg, double grid_value) {
  cfg.validate();
  PointSummary s;
  s.esn0_db = cfg.to_esn0_db(grid_value);
  s.ebn0_db = cfg.to_ebn0_db(grid_value);
  const double esn0 = s.esn0_db;
  int workers = cfg.workers > 0 ? cfg.workers
                                : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  s.counters = run_point([cfg, esn0] { return make_segment_simulator(cfg, esn0); }, cfg.stop, workers);
  return s;
}

std::vector<PointSummary> run_grid(const RunConfig& cfg, bool verbose) {
  std::vector<PointSummary> out;
  for (double v : cfg.snr_db) {
    out.push_back(run_snr_point(cfg, v));
    if (verbose) {
      const auto& p = out.back();
      std::fprintf(stderr, "snr %.4g dB: ber=%.6g fer=%.6g (%" PRIu64 " bits, %" PRIu64 " errors)\n",
                   v, p.counters.ber(), p.counters.fer(), p.counters.bits, p.counters.bit_errors);
    }
  }
  return out;
}

namespace {
std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}
}  // namespace

std::string format_result_rows(std::span<const ResultRow> rows) {
  std::string out = "EbNo;EsNo;decodedFrame;FrameErr;FER;BER\n";
  for (const auto& r : rows) {
    out += fmt_g(r.ebn0_db) + ";" + fmt_g(r.esn0_db) + ";" + std::to_string(r.frames) + ";" +
           std::to_string(r.frame_errors) + ";" + fmt_g(r.fer) + ";" + fmt_g(r.ber) + "\n";
  }
  return out;
}

std::string format_results_csv(std::span<const PointSummary> points) {
  std::vector<ResultRow> rows;
  rows.reserve(points.size());
  for (const auto& p : points)
    rows.push_back({p.ebn0_db, p.esn0_db, p.counters.frames, p.counters.frame_errors,
                    p.counters.fer(), p.counters.ber()});
  return format_result_rows(rows);
}

std::vector<ResultRow> parse_results_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "EbNo;EsNo;decodedFrame;FrameErr;FER;BER")
    throw std::invalid_argument("parse_results_csv: bad header");
  std::vector<ResultRow> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ResultRow r;
    unsigned long long frames = 0, ferr = 0;
    if (std::sscanf(line.c_str(), "%lf;%lf;%llu;%llu;%lf;%lf", &r.ebn0_db, &r.esn0_db, &frames,
                    &ferr, &r.fer, &r.ber) != 6)
      throw std::invalid_argument("parse_results_csv: bad row: " + line);
    r.frames = frames;
    r.frame_errors = ferr;
    out.push_back(r);
  }
  return out;
}

std::string format_manifest(const RunConfig& cfg, std::span<const PointSummary> points,
                            const std::string& revision) {
  std::ostringstream out;
  out << "# run manifest\nrevision = " << revision << "\n\n" << dump_run_config(cfg) << "\n";
  for (size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    auto ci = p.counters.ber_interval();
    out << "# point " << i << ": ebn0_db=" << fmt_g(p.ebn0_db) << " esn0_db=" << fmt_g(p.esn0_db)
        << " bits=" << p.counters.bits << " bit_errors=" << p.counters.bit_errors
        << " frames=" << p.counters.frames << " frame_errors=" << p.counters.frame_errors
        << " ber=" << fmt_g(p.counters.ber()) << " ber95=[" << fmt_g(ci.lo) << "," << fmt_g(ci.hi)
        << "]"
        << " fer=" << fmt_g(p.counters.fer()) << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace drsd
