#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("LANDAU_LAB_BIN");
  REQUIRE(b != nullptr);
  return b;
}

int run(const std::string& args) {
  const std::string cmd = bin() + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / "landau_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("usage errors exit with 2", "[cli]") {
  CHECK(run("no-such-subcommand") == 2);
  CHECK(run("") == 2);
  CHECK(run("kernel-decay --bogus-flag 1") == 2);
  CHECK(run("solve-linear --set bogus.key=1 --out " + scratch("badkey").string()) == 2);
  CHECK(run("solve-linear --config /nonexistent.ini --out " + scratch("nocfg").string()) == 2);
}

TEST_CASE("help exits cleanly", "[cli]") {
  CHECK(run("--help") == 0);
  CHECK(run("solve-linear --help") == 0);
}

TEST_CASE("kernel decay run emits csv, summary and manifest", "[cli]") {
  auto out = scratch("kd");
  CHECK(run("kernel-decay --which glow-riesz --j1 0 --j2 0 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "kernel_decay_glow-riesz_00.csv"));
  CHECK(fs::exists(out / "kernel_decay_summary.json"));
  CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("solve-linear then scatter from the saved run", "[cli]") {
  auto out = scratch("lin");
  CHECK(run("solve-linear --set time.T=12 --set time.dt=0.2 --set xi.levels=8 --out " +
            out.string()) == 0);
  CHECK(fs::exists(out / "tracks.bin"));
  CHECK(fs::exists(out / "fields.csv"));
  auto sc = scratch("scatter");
  CHECK(run("scatter --run-dir " + out.string() + " --t-list 3 5 --out " + sc.string()) == 0);
  CHECK(fs::exists(sc / "scatter.csv"));
}

TEST_CASE("report verifies digests", "[cli]") {
  auto runs = scratch("runs");
  auto sub = runs / "kd";
  fs::create_directories(sub);
  CHECK(run("kernel-decay --which glow --j1 0 --j2 1 --out " + sub.string()) == 0);
  auto rep = scratch("report");
  CHECK(run("report --in " + runs.string() + " --out " + rep.string()) == 0);
  CHECK(fs::exists(rep / "report.json"));
  CHECK(fs::exists(rep / "report.txt"));

  // corrupt an artifact: the digest check must fail with exit 2
  {
    std::ofstream f(sub / "kernel_decay_glow_01.csv", std::ios::app);
    f << "tampered\n";
  }
  CHECK(run("report --in " + runs.string() + " --out " + scratch("report2").string()) == 2);

  // empty input directory: nothing to report on
  CHECK(run("report --in " + scratch("empty").string() + " --out " +
            scratch("report3").string()) == 2);
}

TEST_CASE("config file drives the run", "[cli]") {
  auto out = scratch("cfg");
  auto ini = out / "run.ini";
  {
    std::ofstream f(ini);
    f << "[time]\nT = 2.0\ndt = 0.5\n[xi]\nlevels = 4\n";
  }
  CHECK(run("solve-linear --config " + ini.string() + " --out " + out.string()) == 0);
  std::ifstream man(out / "manifest.json");
  std::string all((std::istreambuf_iterator<char>(man)), std::istreambuf_iterator<char>());
  CHECK(all.find("\"time.T\": \"2\"") != std::string::npos);
}
