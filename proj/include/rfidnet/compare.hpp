#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "rfidnet/engine.hpp"

namespace rfidnet {

enum class TableFormat : std::uint8_t { csv, markdown, json };

/// Throws DomainError for anything but "csv", "markdown"/"md", "json".
TableFormat parse_table_format(std::string_view text);

/// `a` is the candidate (RFID), `b` the reference (baseline). Percent deltas
/// are positive when `a` is better; a zero denominator yields 0.
struct Comparison {
  MetricsReport a;
  MetricsReport b;
  bool digest_match = true;
  double utilization_delta_pp = 0.0;  // (util_a - util_b) * 100
  double latency_delta_pct = 0.0;     // (lat_b - lat_a) / lat_b * 100
  double throughput_delta_pct = 0.0;  // (tput_a - tput_b) / tput_b * 100
  double energy_delta_pct = 0.0;      // (en_b - en_a) / en_b * 100
};

Comparison compare(const MetricsReport& a, const MetricsReport& b);

/// Published figures for three resource-optimization models, quoted as text
/// so they print exactly as published. Accuracy has no computed counterpart.
struct LiteratureRow {
  std::string_view model;
  std::string_view spectrum_utilization_pct;
  std::string_view latency_ms;
  std::string_view throughput_gbps;
  std::string_view energy_kwh;
  std::string_view accuracy_pct;
};

inline constexpr std::array<LiteratureRow, 3> kLiteratureRows{{
    {"SDN-Based Model", "85", "40", "8.8", "450", "92"},
    {"DL-Based Model", "88", "38", "9.0", "420", "94"},
    {"RFID-Based Model", "90", "35", "9.2", "400", "96"},
}};

std::string render(const Comparison& cmp, TableFormat format, bool with_literature);

}  // namespace rfidnet
