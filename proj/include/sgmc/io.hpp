#pragma once

// CSV/JSON emission with a stable schema. Numbers are formatted with
// std::to_chars (shortest round-trip form), so output is locale-independent
// and reruns are bitwise comparable. Metadata rides in leading '# key=value'
// lines (CSV) or a "meta" object (JSON); every file records the SNR/LLR
// convention string.

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgmc/channel.hpp"
#include "sgmc/simulate.hpp"

namespace sgmc {

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc()) throw std::runtime_error("bad number: " + s);
  (void)ptr;
  return v;
}

using Metadata = std::map<std::string, std::string>;

inline Metadata base_metadata() { return {{"convention", kConventionString}}; }

inline void write_meta_lines(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
}

inline constexpr const char* kSimCsvHeader =
    "snr_db,frames,frame_errors,fer,fer_ci_low,fer_ci_high,avg_teps,avg_ms,opt_rate";

inline void emit_csv(const std::vector<SimRecord>& records, const Metadata& meta,
                     std::ostream& os) {
  write_meta_lines(os, meta);
  os << kSimCsvHeader << '\n';
  for (const auto& r : records) {
    os << format_double(r.snr_db) << ',' << r.frames << ',' << r.frame_errors << ','
       << format_double(r.fer) << ',' << format_double(r.fer_ci_low) << ','
       << format_double(r.fer_ci_high) << ',' << format_double(r.avg_teps) << ','
       << format_double(r.avg_ms) << ',' << format_double(r.opt_rate) << '\n';
  }
}

inline constexpr const char* kBoundCsvHeader = "snr_db,kind,value,ci_low,ci_high,params";

inline void emit_csv(const std::vector<BoundPoint>& points, const Metadata& meta,
                     std::ostream& os, const std::string& params = "") {
  write_meta_lines(os, meta);
  os << kBoundCsvHeader << '\n';
  for (const auto& p : points) {
    os << format_double(p.snr_db) << ',' << bound_kind_name(p.kind) << ','
       << format_double(p.value) << ',' << format_double(p.ci_low) << ','
       << format_double(p.ci_high) << ',' << params << '\n';
  }
}

inline void emit_json(const std::vector<SimRecord>& records, const Metadata& meta,
                      std::ostream& os) {
  nlohmann::json j;
  for (const auto& [k, v] : meta) j["meta"][k] = v;
  j["records"] = nlohmann::json::array();
  for (const auto& r : records) {
    j["records"].push_back({{"snr_db", r.snr_db},
                            {"frames", r.frames},
                            {"frame_errors", r.frame_errors},
                            {"fer", r.fer},
                            {"fer_ci_low", r.fer_ci_low},
                            {"fer_ci_high", r.fer_ci_high},
                            {"avg_teps", r.avg_teps},
                            {"avg_ms", r.avg_ms},
                            {"opt_rate", r.opt_rate}});
  }
  os << j.dump(2) << '\n';
}

inline void emit_json(const std::vector<BoundPoint>& points, const Metadata& meta,
                      std::ostream& os, const std::string& params = "") {
  nlohmann::json j;
  for (const auto& [k, v] : meta) j["meta"][k] = v;
  if (!params.empty()) j["meta"]["params"] = params;
  j["points"] = nlohmann::json::array();
  for (const auto& p : points) {
    j["points"].push_back({{"snr_db", p.snr_db},
                           {"kind", bound_kind_name(p.kind)},
                           {"value", p.value},
                           {"ci_low", p.ci_low},
                           {"ci_high", p.ci_high}});
  }
  os << j.dump(2) << '\n';
}

template <typename T>
void emit_file(const std::vector<T>& rows, const Metadata& meta, const std::string& path,
               const std::string& params = "") {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for write: " + path);
  const bool json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
  if constexpr (std::is_same_v<T, SimRecord>) {
    if (json)
      emit_json(rows, meta, f);
    else
      emit_csv(rows, meta, f);
  } else {
    if (json)
      emit_json(rows, meta, f, params);
    else
      emit_csv(rows, meta, f, params);
  }
}

// Round-trip parsers (used by tests and downstream tooling).
inline std::vector<SimRecord> parse_sim_csv(std::istream& is, Metadata* meta = nullptr) {
  std::vector<SimRecord> out;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (meta) {
        const auto eq = line.find('=');
        if (eq != std::string::npos) (*meta)[line.substr(2, eq - 2)] = line.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen) {
      if (line != kSimCsvHeader) throw std::runtime_error("sim csv: unexpected header");
      header_seen = true;
      continue;
    }
    std::stringstream ss(line);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(ss, tok, ',')) cols.push_back(tok);
    if (cols.size() != 9) throw std::runtime_error("sim csv: bad row");
    SimRecord r;
    r.snr_db = parse_double(cols[0]);
    r.frames = std::stoull(cols[1]);
    r.frame_errors = std::stoull(cols[2]);
    r.fer = parse_double(cols[3]);
    r.fer_ci_low = parse_double(cols[4]);
    r.fer_ci_high = parse_double(cols[5]);
    r.avg_teps = parse_double(cols[6]);
    r.avg_ms = parse_double(cols[7]);
    r.opt_rate = parse_double(cols[8]);
    out.push_back(r);
  }
  return out;
}

}  // namespace sgmc
