#include "rfidnet/compare.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace rfidnet {

TableFormat parse_table_format(std::string_view text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "markdown" || text == "md") return TableFormat::markdown;
  if (text == "json") return TableFormat::json;
  throw DomainError("unknown format '" + std::string(text) + "'");
}

namespace {

double relative(double num, double den) { return den != 0.0 ? num / den * 100.0 : 0.0; }

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string literature_markdown() {
  std::string out =
      "| Optimization Model | Spectrum Utilization (%) | Latency (ms) | Throughput (Gbps) | "
      "Energy Consumption (KWh) | Accuracy (%) |\n"
      "|---|---|---|---|---|---|\n";
  for (const auto& row : kLiteratureRows) {
    out += "| ";
    out += row.model;
    for (auto cell : {row.spectrum_utilization_pct, row.latency_ms, row.throughput_gbps,
                      row.energy_kwh, row.accuracy_pct}) {
      out += " | ";
      out += cell;
    }
    out += " |\n";
  }
  return out;
}

}  // namespace

Comparison compare(const MetricsReport& a, const MetricsReport& b) {
  Comparison c;
  c.a = a;
  c.b = b;
  c.digest_match = a.scenario_digest == b.scenario_digest;
  c.utilization_delta_pp = (a.spectrum_utilization - b.spectrum_utilization) * 100.0;
  c.latency_delta_pct = relative(b.mean_latency_ms - a.mean_latency_ms, b.mean_latency_ms);
  c.throughput_delta_pct = relative(a.throughput_bps - b.throughput_bps, b.throughput_bps);
  c.energy_delta_pct = relative(b.energy_joules - a.energy_joules, b.energy_joules);
  return c;
}

std::string render(const Comparison& c, TableFormat format, bool with_literature) {
  const MetricsReport* reports[] = {&c.a, &c.b};
  std::ostringstream out;
  switch (format) {
    case TableFormat::markdown: {
      out << "## Simulated comparison (scenario " << c.a.scenario_name << ", seed " << c.a.seed
          << ")\n\n";
      if (!c.digest_match) out << "> warning: reports come from different scenarios\n\n";
      out << "| Policy | Spectrum Utilization (%) | Latency (ms) | Throughput (Mbps) | Energy (J) |\n"
          << "|---|---|---|---|---|\n";
      for (const auto* r : reports)
        out << "| " << r->policy << " | " << fixed(r->spectrum_utilization * 100.0, 2) << " | "
            << fixed(r->mean_latency_ms, 2) << " | " << fixed(r->throughput_bps / 1e6, 3)
            << " | " << fixed(r->energy_joules, 1) << " |\n";
      out << "\n| Delta (" << c.a.policy << " vs " << c.b.policy << ") | Value |\n"
          << "|---|---|\n"
          << "| Spectrum utilization (pp) | " << fixed(c.utilization_delta_pp, 2) << " |\n"
          << "| Latency reduction (%) | " << fixed(c.latency_delta_pct, 2) << " |\n"
          << "| Throughput gain (%) | " << fixed(c.throughput_delta_pct, 2) << " |\n"
          << "| Energy reduction (%) | " << fixed(c.energy_delta_pct, 2) << " |\n";
      if (with_literature)
        out << "\n## Reported in literature (quoted, not computed)\n\n" << literature_markdown()
            << "\nAccuracy has no stated definition and no simulated counterpart.\n";
      break;
    }
    case TableFormat::csv: {
      out << "kind,name,spectrum_utilization_pct,latency_ms,throughput,throughput_unit,energy,"
             "energy_unit,accuracy_pct\n";
      for (const auto* r : reports)
        out << "simulated," << r->policy << "," << fixed(r->spectrum_utilization * 100.0, 4)
            << "," << fixed(r->mean_latency_ms, 4) << "," << fixed(r->throughput_bps / 1e6, 6)
            << ",Mbps," << fixed(r->energy_joules, 3) << ",J,\n";
      out << "delta," << c.a.policy << "_vs_" << c.b.policy << ","
          << fixed(c.utilization_delta_pp, 4) << "," << fixed(c.latency_delta_pct, 4) << ","
          << fixed(c.throughput_delta_pct, 4) << ",%," << fixed(c.energy_delta_pct, 4)
          << ",%,\n";
      if (!c.digest_match) out << "warning,scenario_digest_mismatch,,,,,,,\n";
      if (with_literature)
        for (const auto& row : kLiteratureRows)
          out << "literature," << row.model << "," << row.spectrum_utilization_pct << ","
              << row.latency_ms << "," << row.throughput_gbps << ",Gbps," << row.energy_kwh
              << ",KWh," << row.accuracy_pct << "\n";
      break;
    }
    case TableFormat::json: {
      nlohmann::ordered_json j;
      j["scenario_digest_match"] = c.digest_match;
      j["scenario_name"] = c.a.scenario_name;
      j["seed"] = c.a.seed;
      auto summary = [](const MetricsReport& r) {
        nlohmann::ordered_json s;
        s["policy"] = r.policy;
        s["spectrum_utilization"] = r.spectrum_utilization;
        s["mean_latency_ms"] = r.mean_latency_ms;
        s["throughput_bps"] = r.throughput_bps;
        s["energy_joules"] = r.energy_joules;
        return s;
      };
      j["a"] = summary(c.a);
      j["b"] = summary(c.b);
      nlohmann::ordered_json d;
      d["spectrum_utilization_pp"] = c.utilization_delta_pp;
      d["latency_reduction_pct"] = c.latency_delta_pct;
      d["throughput_gain_pct"] = c.throughput_delta_pct;
      d["energy_reduction_pct"] = c.energy_delta_pct;
      j["deltas"] = d;
      if (with_literature) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : kLiteratureRows) {
          nlohmann::ordered_json lr;
          lr["model"] = row.model;
          lr["spectrum_utilization_pct"] = row.spectrum_utilization_pct;
          lr["latency_ms"] = row.latency_ms;
          lr["throughput_gbps"] = row.throughput_gbps;
          lr["energy_kwh"] = row.energy_kwh;
          lr["accuracy_pct"] = row.accuracy_pct;
          rows.push_back(std::move(lr));
        }
        j["literature"] = std::move(rows);
      }
      out << j.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

}  // namespace rfidnet
