#include <sstream>
#include <stdexcept>

#include "drsd/harness.hpp"

namespace drsd {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("config: bad value '" + value + "' for key '" + key + "'");
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) bad_value(key, v);
    return d;
  } catch (const std::invalid_argument&) {
    bad_value(key, v);
  } catch (const std::out_of_range&) {
    bad_value(key, v);
  }
}

int64_t to_int(const std::string& key, const std::string& v) {
  // Counts may be written in scientific notation (1e8).
  double d = to_double(key, v);
  if (d != static_cast<int64_t>(d)) bad_value(key, v);
  return static_cast<int64_t>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  bad_value(key, v);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "code") {
    if (value == "staircase")
      cfg.code = CodeKind::kStaircase;
    else if (value == "ofec")
      cfg.code = CodeKind::kOfec;
    else
      bad_value(key, value);
  } else if (key == "decoder") {
    if (value == "drsd")
      cfg.decoder = DecoderKind::kDrsd;
    else if (value == "ibdd")
      cfg.decoder = DecoderKind::kIbdd;
    else
      bad_value(key, value);
  } else if (key == "snr_axis") {
    if (value == "ebn0")
      cfg.axis = SnrAxis::kEbn0;
    else if (value == "esn0")
      cfg.axis = SnrAxis::kEsn0;
    else
      bad_value(key, value);
  } else if (key == "snr_db") {
    cfg.snr_db.clear();
    for (const auto& item : split_list(value)) cfg.snr_db.push_back(to_double(key, item));
  } else if (key == "seed") {
    cfg.seed = static_cast<uint64_t>(to_int(key, value));
  } else if (key == "workers") {
    cfg.workers = static_cast<int>(to_int(key, value));
  } else if (key == "max_bits") {
    cfg.stop.max_bits = static_cast<uint64_t>(to_int(key, value));
  } else if (key == "max_bit_errors") {
    cfg.stop.max_bit_errors = static_cast<uint64_t>(to_int(key, value));
  } else if (key == "max_frame_errors") {
    cfg.stop.max_frame_errors = static_cast<uint64_t>(to_int(key, value));
  } else if (key == "noise") {
    cfg.noise = to_bool(key, value);
  } else if (key == "i_s") {
    cfg.drs.i_s = static_cast<int>(to_int(key, value));
  } else if (key == "i_e") {
    cfg.drs.i_e = static_cast<int>(to_int(key, value));
  } else if (key == "erasure_threshold") {
    cfg.drs.erasure_threshold = to_double(key, value);
  } else if (key == "j_max") {
    cfg.drs.j_max = static_cast<int>(to_int(key, value));
  } else if (key == "quantizer") {
    if (value == "equal_mass")
      cfg.drs.quantizer = DrsParams::Quantizer::kEqualMass;
    else if (value == "capped")
      cfg.drs.quantizer = DrsParams::Quantizer::kCapped;
    else
      bad_value(key, value);
  } else if (key == "t_quan_max") {
    cfg.drs.t_quan_max = to_double(key, value);
  } else if (key == "anchors") {
    cfg.anchors = to_bool(key, value);
  } else if (key == "spr") {
    cfg.spr = to_bool(key, value);
  } else if (key == "sc_window") {
    cfg.sc_window = static_cast<int>(to_int(key, value));
  } else if (key == "sc_iterations") {
    cfg.sc_iterations = static_cast<int>(to_int(key, value));
  } else if (key == "sc_chain_blocks") {
    cfg.sc_chain_blocks = static_cast<int>(to_int(key, value));
  } else if (key == "ofec_iterations") {
    cfg.ofec_iterations = static_cast<int>(to_int(key, value));
  } else if (key == "ofec_ta_init") {
    cfg.ofec_anchor.ta_init = static_cast<int>(to_int(key, value));
  } else if (key == "ofec_ta_step") {
    cfg.ofec_anchor.ta_step = static_cast<int>(to_int(key, value));
  } else if (key == "ofec_ta_star") {
    cfg.ofec_anchor.ta_star = static_cast<int>(to_int(key, value));
  } else if (key == "ofec_p_a") {
    cfg.ofec_anchor.p_a = static_cast<int>(to_int(key, value));
  } else if (key == "ofec_p_r") {
    cfg.ofec_anchor.p_r = static_cast<int>(to_int(key, value));
  } else if (key == "ofec_segment_pairs") {
    cfg.ofec_segment_pairs = static_cast<int>(to_int(key, value));
  } else if (key == "ofec_pi") {
    if (value == "identity") {
      for (int i = 0; i < 16; ++i) cfg.ofec_pi[i] = static_cast<uint8_t>(i);
    } else {
      auto items = split_list(value);
      if (items.size() != 16) bad_value(key, value);
      for (int i = 0; i < 16; ++i) cfg.ofec_pi[i] = static_cast<uint8_t>(to_int(key, items[i]));
      OfecLayout check(cfg.ofec_pi);  // rejects non-permutations
    }
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
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
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key = value");
    set_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_text_file(path)); }

std::string dump_run_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "code = " << (cfg.code == CodeKind::kStaircase ? "staircase" : "ofec") << "\n";
  out << "decoder = " << (cfg.decoder == DecoderKind::kDrsd ? "drsd" : "ibdd") << "\n";
  out << "snr_axis = " << (cfg.axis == SnrAxis::kEbn0 ? "ebn0" : "esn0") << "\n";
  out << "snr_db = ";
  for (size_t i = 0; i < cfg.snr_db.size(); ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", cfg.snr_db[i]);
    out << (i ? ", " : "") << buf;
  }
  out << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "workers = " << cfg.workers << "\n";
  out << "max_bits = " << cfg.stop.max_bits << "\n";
  out << "max_bit_errors = " << cfg.stop.max_bit_errors << "\n";
  out << "max_frame_errors = " << cfg.stop.max_frame_errors << "\n";
  out << "noise = " << (cfg.noise ? "on" : "off") << "\n";
  out << "i_s = " << cfg.drs.i_s << "\n";
  out << "i_e = " << cfg.drs.i_e << "\n";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", cfg.drs.erasure_threshold);
  out << "erasure_threshold = " << buf << "\n";
  out << "j_max = " << cfg.drs.j_max << "\n";
  out << "quantizer = "
      << (cfg.drs.quantizer == DrsParams::Quantizer::kEqualMass ? "equal_mass" : "capped") << "\n";
  std::snprintf(buf, sizeof buf, "%.10g", cfg.drs.t_quan_max);
  out << "t_quan_max = " << buf << "\n";
  out << "anchors = " << (cfg.anchors ? "on" : "off") << "\n";
  out << "spr = " << (cfg.spr ? "on" : "off") << "\n";
  out << "sc_window = " << cfg.sc_window << "\n";
  out << "sc_iterations = " << cfg.sc_iterations << "\n";
  out << "sc_chain_blocks = " << cfg.sc_chain_blocks << "\n";
  out << "ofec_iterations = " << cfg.ofec_iterations << "\n";
  out << "ofec_ta_init = " << cfg.ofec_anchor.ta_init << "\n";
  out << "ofec_ta_step = " << cfg.ofec_anchor.ta_step << "\n";
  out << "ofec_ta_star = " << cfg.ofec_anchor.ta_star << "\n";
  out << "ofec_p_a = " << cfg.ofec_anchor.p_a << "\n";
  out << "ofec_p_r = " << cfg.ofec_anchor.p_r << "\n";
  out << "ofec_segment_pairs = " << cfg.ofec_segment_pairs << "\n";
  out << "ofec_pi = ";
  for (int i = 0; i < 16; ++i) out << (i ? "," : "") << static_cast<int>(cfg.ofec_pi[i]);
  out << "\n";
  return out.str();
}

}  // namespace drsd
