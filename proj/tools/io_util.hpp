#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "gkb/thresholds.hpp"

namespace gkb::cli {

// 17-significant-digit shortest form (round-trip safe, locale-independent).
std::string format_double(double v);

// RFC-4180 quoting, applied only when the field needs it.
std::string csv_field(const std::string& s);

std::string timestamp_utc();

struct RunManifest {
  std::string subcommand;
  std::string command_line;
  nlohmann::json parameters;
  int threads = 1;
  std::size_t rows = 0;
  std::map<std::string, std::size_t> diagnostics;
  nlohmann::json to_json() const;
};

std::string sweep_to_csv(const gkb::SweepTable& table);
nlohmann::json sweep_to_json(const gkb::SweepTable& table);
std::map<std::string, std::size_t> diag_summary(const gkb::SweepTable& table);

// Throws std::ios_base::failure on any write error.
void write_file(const std::string& path, const std::string& contents);

}  // namespace gkb::cli
