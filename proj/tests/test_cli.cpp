#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(RFIDNET_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rfidnet_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

const std::string kScenarios = RFIDNET_SCENARIO_DIR;

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST_CASE("run writes identical reports for identical inputs") {
  TempDir tmp;
  const std::string base = "run --scenario " + kScenarios + "/traffic_stop.toml --policy rfid --seed 42 --out ";
  CHECK(cli(base + tmp / "a.json").code == 0);
  CHECK(cli(base + tmp / "b.json").code == 0);
  CHECK(slurp(tmp / "a.json") == slurp(tmp / "b.json"));
  CHECK(slurp(tmp / "a.json").find("\"seed\": 42") != std::string::npos);
  CHECK(cli(base + tmp / "c.json" + " --parallel").code == 0);
  CHECK(slurp(tmp / "a.json") == slurp(tmp / "c.json"));
}

TEST_CASE("exit codes") {
  TempDir tmp;
  CHECK(cli("run --scenario " + tmp / "missing.toml").code == 3);
  write(tmp / "neg.toml", "[scenario]\nduration_ticks = -3\n[nodes.a]\ncount = 1\n");
  const auto neg = cli("run --scenario " + tmp / "neg.toml");
  CHECK(neg.code == 2);
  CHECK(neg.out.find("scenario.duration_ticks") != std::string::npos);
  CHECK(cli("validate --scenario " + tmp / "neg.toml").code == 2);
  CHECK(cli("validate --scenario " + kScenarios + "/canonical.toml").code == 0);
  CHECK(cli("run --scenario " + kScenarios + "/quiescent.toml --policy lte").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("").code == 2);
  CHECK(cli("--help").code == 0);
  CHECK(cli("run --scenario " + kScenarios + "/quiescent.toml --out /nonexistent/dir/r.json").code == 3);
}

TEST_CASE("compare renders every format") {
  TempDir tmp;
  const std::string sc = kScenarios + "/traffic_stop.toml";
  REQUIRE(cli("run --scenario " + sc + " --policy rfid --out " + tmp / "r.json").code == 0);
  REQUIRE(cli("run --scenario " + sc + " --policy baseline4g --out " + tmp / "b.json").code == 0);
  const auto md = cli("compare " + tmp / "r.json " + tmp / "b.json --with-literature");
  CHECK(md.code == 0);
  CHECK(md.out.find("| SDN-Based Model | 85 | 40 | 8.8 | 450 | 92 |") != std::string::npos);
  CHECK(cli("compare " + tmp / "r.json " + tmp / "b.json --format csv").code == 0);
  CHECK(cli("compare " + tmp / "r.json " + tmp / "b.json --format json").code == 0);
  CHECK(cli("compare " + tmp / "r.json " + tmp / "b.json --format xml").code == 2);
  CHECK(cli("compare " + tmp / "r.json " + tmp / "nope.json").code == 3);
  write(tmp / "junk.json", "{\"policy\": 3}");
  CHECK(cli("compare " + tmp / "r.json " + tmp / "junk.json").code == 2);

  const auto same = cli("compare " + tmp / "r.json " + tmp / "r.json --format csv");
  CHECK(same.out.find("delta,rfid_vs_rfid,0.0000,0.0000,0.0000,%,0.0000,%,") != std::string::npos);
}

TEST_CASE("replay") {
  TempDir tmp;
  const std::string sc = kScenarios + "/quiescent.toml";
  write(tmp / "one.txt", "12345ABC\n");
  const auto one = cli("replay --feed " + tmp / "one.txt --scenario " + sc + " --out " + tmp / "r.json");
  CHECK(one.code == 0);
  CHECK(one.out.find("ALLOC N0 ") != std::string::npos);
  CHECK(one.out.find("STATUS ") != std::string::npos);
  CHECK(fs::exists(tmp / "r.json"));

  std::string text;
  for (int i = 0; i < 6; ++i) text += "TAG T" + std::to_string(i) + " N1 STD " + std::to_string(i * 10) + "\n";
  text += "TAG oops\n";
  write(tmp / "bad.txt", text);
  const auto bad = cli("replay --feed " + tmp / "bad.txt --scenario " + sc);
  CHECK(bad.code == 4);
  CHECK(bad.out.find("line 7") != std::string::npos);

  CHECK(cli("replay --feed " + tmp / "none.txt --scenario " + sc).code == 3);
  CHECK(cli("replay --scenario " + sc).code == 2);
}
