#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dysnav/bundle_json.hpp"
#include "support/planted.hpp"

using namespace dysnav;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / fmt::format("dysnav_cli_{}", ::getpid());
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
  const std::string cmd = fmt::format("{} {} 2>/dev/null >/dev/null", DYSNAV_CLI, args);
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string records() {
  planted::ChangeParams p;
  p.nodes = 20;
  p.columns = 4;
  p.change_at = 2;
  return planted::change_records(p, 4);
}

}  // namespace

TEST_CASE("analyze writes a bundle matching the library") {
  TempDir dir;
  write_file(dir.path / "in.csv", records());
  const auto out = dir.path / "bundle.json";
  const auto args = fmt::format("analyze --input {} --epsilon 1d --slices 3 --tau 0.5 --metric occurrency --mode ct "
                                "--output {}",
                                (dir.path / "in.csv").string(), out.string());
  REQUIRE(run_cli(args) == 0);
  const auto bundle = deserialize_bundle(read_file(out));
  CHECK(bundle.grid.alpha == 4);
  CHECK(bundle.grid.omega == 3);
  CHECK(bundle.config.mode == HierarchyMode::CounterTerrorism);

  AnalysisConfig cfg;
  cfg.input_path = (dir.path / "in.csv").string();
  cfg.omega = 3;
  cfg.metric = MetricKind::Occurrency;
  cfg.mode = HierarchyMode::CounterTerrorism;
  cfg.output_path = out.string();
  CHECK(serialize_bundle(run_pipeline(cfg)) == read_file(out));
}

TEST_CASE("tau grid option") {
  TempDir dir;
  write_file(dir.path / "in.csv", records());
  const auto out = dir.path / "bundle.json";
  REQUIRE(run_cli(fmt::format("analyze --input {} --tau-grid 0.3,0.5,0.7 --output {}", (dir.path / "in.csv").string(),
                              out.string())) == 0);
  const auto bundle = deserialize_bundle(read_file(out));
  CHECK(bundle.grid.axis == RowAxis::TauGrid);
  CHECK(bundle.grid.taus == std::vector<double>{0.3, 0.5, 0.7});
}

TEST_CASE("exit codes") {
  TempDir dir;
  const auto in = (dir.path / "in.csv").string();
  write_file(in, records());
  write_file(dir.path / "empty.csv", "");
  write_file(dir.path / "oneday.csv", "a,b,2008/03/01-10:00,1,x\n");

  CHECK(run_cli("analyze --input " + (dir.path / "empty.csv").string()) == 2);
  CHECK(run_cli("analyze --input " + (dir.path / "missing.csv").string()) == 2);
  CHECK(run_cli("analyze --input " + (dir.path / "oneday.csv").string()) == 3);
  CHECK(run_cli("analyze --input " + in + " --tau 2") == 3);
  CHECK(run_cli("analyze --input " + in + " --slices 0") == 3);
  CHECK(run_cli("analyze --input " + in + " --epsilon 1fortnight") == 3);
  CHECK(run_cli("analyze --input " + in + " --metric median") == 3);
  CHECK(run_cli("analyze --input " + in + " --mode sideways") == 3);
  CHECK(run_cli("analyze --input " + in + " --hierarchy-cell 1") == 3);
  CHECK(run_cli("analyze") == 3);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("analyze --input " + in + " --output " + (dir.path / "no/such/dir/b.json").string()) == 2);
}
