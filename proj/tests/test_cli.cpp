#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "het/synth.hpp"

#ifndef HET_CLI_PATH
#define HET_CLI_PATH ""
#endif

using namespace het;

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(HET_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::size_t count_lines(const fs::path& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path make_sequence(const fs::path& dir) {
  ScenarioSpec spec;
  spec.width = 160;
  spec.height = 120;
  spec.frame_count = 15;
  spec.target_w = 32;
  spec.target_h = 24;
  spec.start_x = 16;
  spec.start_y = 20;
  spec.vel_x = 1.0;
  generate_synthetic(spec, dir);
  return dir;
}

const char* kFastConfig =
    "m=40\nbeta=8\npi=16\nn_update=20\nseed=3\n";

}  // namespace

TEST_CASE("cli: valid track run exits 0 with one CSV line per frame") {
  REQUIRE(!std::string(HET_CLI_PATH).empty());
  TempDir seq("het_cli_seq");
  TempDir out("het_cli_out");
  make_sequence(seq.path);
  std::ofstream(seq.path / "fast.conf") << kFastConfig;

  const int code = run_cli("track --seq " + seq.path.string() + " --config " +
                           (seq.path / "fast.conf").string() + " --out " + out.path.string() +
                           " --diag");
  CHECK(code == 0);
  CHECK(count_lines(out.path / "results.csv") == 15);
  CHECK(fs::exists(out.path / "manifest.json"));
  CHECK(count_lines(out.path / "diagnostics.jsonl") == 14);  // no line for the init frame
}

TEST_CASE("cli: --init works without ground truth") {
  TempDir seq("het_cli_noinit_seq");
  TempDir out("het_cli_noinit_out");
  make_sequence(seq.path);
  fs::remove(seq.path / "groundtruth_rect.txt");
  std::ofstream(seq.path / "fast.conf") << kFastConfig;

  const int code = run_cli("track --seq " + seq.path.string() + " --init 16,20,32,24 --config " +
                           (seq.path / "fast.conf").string() + " --out " + out.path.string());
  CHECK(code == 0);
  CHECK(count_lines(out.path / "results.csv") == 15);
}

TEST_CASE("cli: malformed box exits 2 and writes nothing") {
  TempDir seq("het_cli_badbox_seq");
  TempDir out("het_cli_badbox_out");
  make_sequence(seq.path);
  const int code = run_cli("track --seq " + seq.path.string() + " --init 16,20,32 --out " +
                           (out.path / "run").string());
  CHECK(code == 2);
  CHECK(!fs::exists(out.path / "run"));
}

TEST_CASE("cli: missing sequence exits 3, usage errors exit 2") {
  CHECK(run_cli("track --seq /nonexistent/path") == 3);
  CHECK(run_cli("track") == 2);
  CHECK(run_cli("definitely-not-a-subcommand") == 2);
}

TEST_CASE("cli: synth then eval produces the metric layout") {
  TempDir work("het_cli_eval_work");
  std::ofstream(work.path / "scene.conf")
      << "width=160\nheight=120\nframes=15\ntarget_w=32\ntarget_h=24\n"
      << "start_x=16\nstart_y=20\nvel_x=1\nvel_y=0.5\nnoise_sigma=2\n";
  const fs::path seq_dir = work.path / "seq";
  int code = run_cli("synth --spec " + (work.path / "scene.conf").string() + " --out " +
                     seq_dir.string());
  REQUIRE(code == 0);
  CHECK(fs::exists(seq_dir / "img" / "0001.pgm"));
  CHECK(fs::exists(seq_dir / "groundtruth_rect.txt"));

  std::ofstream(work.path / "fast.conf") << kFastConfig;
  const fs::path eval_dir = work.path / "eval";
  code = run_cli("eval --seq " + seq_dir.string() + " --config " +
                 (work.path / "fast.conf").string() + " --out " + eval_dir.string());
  CHECK(code == 0);
  CHECK(fs::exists(eval_dir / "results" / "seq.csv"));
  CHECK(fs::exists(eval_dir / "metrics" / "seq.json"));
  CHECK(fs::exists(eval_dir / "curves" / "seq_precision.csv"));
  CHECK(fs::exists(eval_dir / "curves" / "seq_success.csv"));
  CHECK(fs::exists(eval_dir / "aggregate.json"));
  CHECK(count_lines(eval_dir / "curves" / "seq_precision.csv") == 51);
  CHECK(count_lines(eval_dir / "curves" / "seq_success.csv") == 21);
}

TEST_CASE("cli: identical seeds give byte-identical results CSVs") {
  TempDir seq("het_cli_det_seq");
  TempDir out_a("het_cli_det_a");
  TempDir out_b("het_cli_det_b");
  make_sequence(seq.path);
  std::ofstream(seq.path / "fast.conf") << kFastConfig;
  const std::string base = "track --seq " + seq.path.string() + " --config " +
                           (seq.path / "fast.conf").string() + " --seed 42 --out ";
  REQUIRE(run_cli(base + out_a.path.string()) == 0);
  REQUIRE(run_cli(base + out_b.path.string()) == 0);

  std::ifstream fa(out_a.path / "results.csv", std::ios::binary);
  std::ifstream fb(out_b.path / "results.csv", std::ios::binary);
  const std::string da((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  const std::string db((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(!da.empty());
  CHECK(da == db);
}
