#include "rfidnet/report_io.hpp"

#include <cerrno>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace rfidnet {

using ordered_json = nlohmann::ordered_json;

std::string report_to_json(const MetricsReport& r) {
  ordered_json j;
  j["tool_version"] = r.tool_version;
  j["policy"] = r.policy;
  j["scenario_name"] = r.scenario_name;
  j["scenario_digest"] = r.scenario_digest;
  j["seed"] = r.seed;
  j["duration_ticks"] = r.duration_ticks;
  j["tick_dt_s"] = r.tick_dt_s;
  j["spectrum_utilization"] = r.spectrum_utilization;
  j["mean_latency_ms"] = r.mean_latency_ms;
  j["throughput_bps"] = r.throughput_bps;
  j["energy_joules"] = r.energy_joules;
  j["arrived_packets"] = r.arrived_packets;
  j["delivered_packets"] = r.delivered_packets;
  j["queued_packets"] = r.queued_packets;
  j["served_bits_by_node"] = r.served_bits_by_node;
  ordered_json traces;
  traces["spectrum_utilization"] = r.traces.spectrum_utilization;
  traces["mean_latency_ms"] = r.traces.mean_latency_ms;
  traces["throughput_bps"] = r.traces.throughput_bps;
  traces["energy_joules"] = r.traces.energy_joules;
  j["traces"] = std::move(traces);
  return j.dump(1) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    MetricsReport r;
    r.tool_version = j.at("tool_version").get<std::string>();
    r.policy = j.at("policy").get<std::string>();
    r.scenario_name = j.at("scenario_name").get<std::string>();
    r.scenario_digest = j.at("scenario_digest").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.duration_ticks = j.at("duration_ticks").get<std::uint64_t>();
    r.tick_dt_s = j.at("tick_dt_s").get<double>();
    r.spectrum_utilization = j.at("spectrum_utilization").get<double>();
    r.mean_latency_ms = j.at("mean_latency_ms").get<double>();
    r.throughput_bps = j.at("throughput_bps").get<double>();
    r.energy_joules = j.at("energy_joules").get<double>();
    r.arrived_packets = j.at("arrived_packets").get<std::uint64_t>();
    r.delivered_packets = j.at("delivered_packets").get<std::uint64_t>();
    r.queued_packets = j.at("queued_packets").get<std::uint64_t>();
    r.served_bits_by_node = j.at("served_bits_by_node").get<std::vector<double>>();
    const auto& t = j.at("traces");
    r.traces.spectrum_utilization = t.at("spectrum_utilization").get<std::vector<double>>();
    r.traces.mean_latency_ms = t.at("mean_latency_ms").get<std::vector<double>>();
    r.traces.throughput_bps = t.at("throughput_bps").get<std::vector<double>>();
    r.traces.energy_joules = t.at("energy_joules").get<std::vector<double>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(std::string("malformed report: ") + e.what());
  }
}

void write_report_file(const MetricsReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::system_error(errno ? errno : EIO, std::generic_category(), path);
  out << report_to_json(report);
  out.flush();
  if (!out) throw std::system_error(EIO, std::generic_category(), path);
}

MetricsReport read_report_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno ? errno : ENOENT, std::generic_category(), path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return report_from_json(buf.str());
}

}  // namespace rfidnet
