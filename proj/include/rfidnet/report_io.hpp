#pragma once

#include <stdexcept>
#include <string>

#include "rfidnet/engine.hpp"

namespace rfidnet {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// JSON with a fixed key order; identical reports give identical bytes.
std::string report_to_json(const MetricsReport& report);

/// Throws ReportError on malformed or incomplete documents.
MetricsReport report_from_json(const std::string& text);

/// Throws std::system_error on I/O failure.
void write_report_file(const MetricsReport& report, const std::string& path);
MetricsReport read_report_file(const std::string& path);

}  // namespace rfidnet
