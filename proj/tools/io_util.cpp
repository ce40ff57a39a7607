#include "io_util.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "gkb/constants.hpp"

namespace gkb::cli {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json diag = nlohmann::json::object();
  for (const auto& [k, v] : diagnostics) diag[k] = v;
  return {{"tool", "gkb"},
          {"version", kVersion},
          {"subcommand", subcommand},
          {"command", command_line},
          {"parameters", parameters},
          {"threads", threads},
          {"rows", rows},
          {"diagnostics", diag},
          {"timestamp_utc", timestamp_utc()}};
}

std::string sweep_to_csv(const gkb::SweepTable& table) {
  std::string out;
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out += cols[i];
    out += i + 1 < cols.size() ? ',' : '\n';
  }
  for (const auto& r : table.rows) {
    out += csv_field(r.channel);
    out += ',';
    out += csv_field(r.param1_name);
    out += ',';
    out += format_double(r.param1);
    out += ',';
    out += csv_field(r.param2_name);
    out += ',';
    if (r.param2.has_value()) out += format_double(*r.param2);
    out += ',';
    out += format_double(r.gamma_star);
    out += ',';
    out += format_double(r.delta_g);
    out += ',';
    out += format_double(r.info_term);
    out += ',';
    out += format_double(r.lower_bound);
    out += ',';
    out += format_double(r.upper_bound);
    out += ',';
    out += csv_field(r.direction);
    out += ',';
    out += csv_field(r.diag);
    out += '\n';
  }
  return out;
}

nlohmann::json sweep_to_json(const gkb::SweepTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    nlohmann::json row = {{"channel", r.channel},
                          {"param1_name", r.param1_name},
                          {"param1", r.param1},
                          {"param2_name", r.param2_name},
                          {"gamma_star", r.gamma_star},
                          {"delta_g", r.delta_g},
                          {"info_term", r.info_term},
                          {"lower_bound", r.lower_bound},
                          {"upper_bound", r.upper_bound},
                          {"direction", r.direction},
                          {"diag", r.diag}};
    row["param2"] = r.param2.has_value() ? nlohmann::json(*r.param2) : nlohmann::json();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<std::string, std::size_t> diag_summary(const gkb::SweepTable& table) {
  std::map<std::string, std::size_t> out;
  for (const auto& r : table.rows) {
    const std::string key = r.diag.rfind("error:", 0) == 0 ? "error" : r.diag;
    ++out[key];
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::ios_base::failure("cannot open " + path + " for writing");
  f << contents;
  f.flush();
  if (!f) throw std::ios_base::failure("write to " + path + " failed");
}

}  // namespace gkb::cli
