// rfidnet command-line front end.
//
// Exit codes: 0 ok, 2 invalid input or usage, 3 I/O failure, 4 feed error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <system_error>

#include "CLI11.hpp"
#include "rfidnet/compare.hpp"
#include "rfidnet/engine.hpp"
#include "rfidnet/replay.hpp"
#include "rfidnet/report_io.hpp"
#include "rfidnet/scenario.hpp"
#include "rfidnet/udp_feed.hpp"
#include "rfidnet/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitIo = 3;
constexpr int kExitFeed = 4;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::system_error(errno, std::generic_category(), "cannot write " + out_path);
  f << text;
  if (!f) throw std::system_error(errno, std::generic_category(), "write failed for " + out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive spectrum allocation simulator for RFID-tagged traffic"};
  app.set_version_flag("--version", std::string(rfidnet::kToolVersion));
  app.require_subcommand(1);

  std::string scenario_path;
  std::string policy_text = "rfid";
  std::optional<std::uint64_t> seed;
  std::string out_path;
  bool parallel = false;

  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write a JSON report");
  run_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--policy", policy_text, "rfid or baseline4g");
  run_cmd->add_option("--seed", seed, "Override the scenario seed");
  run_cmd->add_option("--out", out_path, "Report path (stdout when omitted)");
  run_cmd->add_flag("--parallel", parallel, "Use the OpenMP kernels");

  std::string report_a, report_b, format_text = "markdown";
  bool with_literature = false;
  auto* cmp_cmd = app.add_subcommand("compare", "Tabulate two reports (candidate, reference)");
  cmp_cmd->add_option("a", report_a, "Candidate report")->required();
  cmp_cmd->add_option("b", report_b, "Reference report")->required();
  cmp_cmd->add_option("--format", format_text, "csv, markdown or json");
  cmp_cmd->add_flag("--with-literature", with_literature, "Append quoted literature figures");
  cmp_cmd->add_option("--out", out_path, "Output path (stdout when omitted)");

  std::string feed_path;
  std::optional<std::uint16_t> udp_port;
  int udp_idle_ms = 1000;
  auto* replay_cmd = app.add_subcommand("replay", "Drive the controller from a tag feed");
  auto* feed_opt = replay_cmd->add_option("--feed", feed_path, "Feed file, one TAG per line");
  auto* udp_opt = replay_cmd->add_option("--udp", udp_port, "Listen on this UDP port (0: any)");
  feed_opt->excludes(udp_opt);
  replay_cmd->add_option("--udp-idle-ms", udp_idle_ms, "End the UDP feed after this idle time")
      ->check(CLI::PositiveNumber);
  replay_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
  replay_cmd->add_option("--policy", policy_text, "rfid or baseline4g");
  replay_cmd->add_option("--out", out_path, "Report path (none when omitted)");

  auto* val_cmd = app.add_subcommand("validate", "Check a scenario file");
  val_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*run_cmd) {
      rfidnet::Scenario sc = rfidnet::load_scenario(scenario_path);
      if (seed) sc.seed = *seed;
      const auto policy = rfidnet::parse_policy(policy_text);
      rfidnet::EngineOptions opts;
      opts.exec = parallel ? rfidnet::Exec::parallel : rfidnet::Exec::serial;
      emit(rfidnet::report_to_json(rfidnet::run(sc, policy, opts)), out_path);
    } else if (*cmp_cmd) {
      const auto fmt = rfidnet::parse_table_format(format_text);
      const auto cmp = rfidnet::compare(rfidnet::read_report_file(report_a),
                                        rfidnet::read_report_file(report_b));
      if (!cmp.digest_match)
        std::cerr << "warning: reports were produced from different scenarios\n";
      emit(rfidnet::render(cmp, fmt, with_literature), out_path);
    } else if (*replay_cmd) {
      if (feed_path.empty() && !udp_port) {
        std::cerr << "replay: one of --feed or --udp is required\n";
        return kExitInvalid;
      }
      const rfidnet::Scenario sc = rfidnet::load_scenario(scenario_path);
      const auto policy = rfidnet::parse_policy(policy_text);
      rfidnet::ReplayResult result;
      if (udp_port) {
        rfidnet::wire::UdpFeed::Options uo;
        uo.port = *udp_port;
        uo.idle_timeout = std::chrono::milliseconds(udp_idle_ms);
        rfidnet::wire::UdpFeed feed(uo);
        std::cerr << "listening on udp port " << feed.port() << "\n";
        result = rfidnet::replay(feed, sc, policy,
                                 [&](const auto& allocs, const auto& status) {
                                   for (const auto& a : allocs)
                                     std::cout << rfidnet::wire::serialize(a);
                                   std::cout << rfidnet::wire::serialize(status);
                                   feed.respond(allocs, status);
                                 });
      } else {
        rfidnet::wire::FileFeed feed(feed_path);
        result = rfidnet::replay(feed, sc, policy, [](const auto& allocs, const auto& status) {
          for (const auto& a : allocs) std::cout << rfidnet::wire::serialize(a);
          std::cout << rfidnet::wire::serialize(status);
        });
      }
      std::cout.flush();
      if (!out_path.empty()) rfidnet::write_report_file(result.report, out_path);
    } else if (*val_cmd) {
      const rfidnet::Scenario sc = rfidnet::load_scenario(scenario_path);
      std::cout << "ok " << sc.name << " nodes=" << sc.nodes.size()
                << " digest=" << rfidnet::digest(sc) << "\n";
    }
  } catch (const rfidnet::wire::FeedError& e) {
    std::cerr << "feed error: " << e.what() << "\n";
    return kExitFeed;
  } catch (const rfidnet::wire::TransportError& e) {
    std::cerr << "transport error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::system_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const rfidnet::ScenarioError& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const rfidnet::ReportError& e) {
    std::cerr << "invalid report: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
