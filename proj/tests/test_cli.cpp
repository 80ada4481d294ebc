#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string &name) {
  auto dir = fs::temp_directory_path() / ("fuzzyshape_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Runs the CLI inside `dir` with the given arguments (already shell-quoted).
Run cli(const fs::path &dir, const std::string &args, const std::string &env = "") {
  const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" FZS_CLI_PATH "' " + args + " >'" +
                          (dir / "stdout.txt").string() + "' 2>'" + (dir / "stderr.txt").string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(dir / "stdout.txt"), slurp(dir / "stderr.txt")};
}

const std::string kData = FZS_DATA_DIR;

}  // namespace

TEST_CASE("classify prints the shape and appends a record") {
  const auto dir = scratch("classify");
  const auto r = cli(dir, "classify --kind eye --width 48 --height 24 --timestamp 100");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("HBWP:        50.00") != std::string::npos);
  CHECK(r.out.find("dominant:    Very Wide") != std::string::npos);
  CHECK(r.out.find("Very Wide : 100.00 %") != std::string::npos);
  const auto rec = slurp(dir / "shape_records.jsonl");
  CHECK(rec.find("\"kind\":\"right_eye\"") != std::string::npos);
  CHECK(rec.find("\"timestamp\":100") != std::string::npos);

  cli(dir, "classify --kind nose --width 35 --height 68 --id N4");
  const auto rec2 = slurp(dir / "shape_records.jsonl");
  CHECK(std::count(rec2.begin(), rec2.end(), '\n') == 2);
  CHECK(rec2.rfind(rec, 0) == 0);
}

TEST_CASE("classify reports the lip ratio for a square lip") {
  const auto dir = scratch("lip");
  const auto r = cli(dir, "classify --kind lip --width 40 --height 40 --no-record");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("HBWP:        100.00") != std::string::npos);
  CHECK(!fs::exists(dir / "shape_records.jsonl"));
}

TEST_CASE("invalid input exits with status 2") {
  const auto dir = scratch("invalid");
  auto r = cli(dir, "classify --kind eye --width 0 --height 24");
  CHECK(r.code == 2);
  CHECK(r.err.find("InvalidMeasurement") != std::string::npos);
  CHECK(r.out.empty());
  CHECK(cli(dir, "classify --kind ear --width 10 --height 24").code == 2);
  CHECK(cli(dir, "classify --kind eye --width ten --height 24").code == 2);
  CHECK(cli(dir, "classify --width 10 --height 24").code == 2);
  CHECK(cli(dir, "frobnicate").code == 2);
  CHECK(cli(dir, "").code == 2);
  CHECK(cli(dir, "--help").code == 0);
}

TEST_CASE("batch writes one record per valid row") {
  const auto dir = scratch("batch");
  auto r = cli(dir, "batch --input '" + kData + "/reference_measurements.csv' --output out.jsonl --timestamp 1");
  REQUIRE(r.code == 0);
  CHECK(r.out == "rows: 15  records: 15  errors: 0\n");

  std::ofstream(dir / "bad.csv") << "id,kind,width_px,height_px\nA,lip,60,21\nB,right_eye,0,24\nC,nose,35,68\n";
  r = cli(dir, "batch --input bad.csv --output bad.jsonl");
  CHECK(r.code == 0);
  CHECK(r.out == "rows: 3  records: 2  errors: 1\n");
  CHECK(r.err.find("bad.csv:3") != std::string::npos);

  std::ofstream(dir / "empty.csv") << "id,kind,width_px,height_px\n";
  r = cli(dir, "batch --input empty.csv --output empty.jsonl");
  CHECK(r.code == 0);
  CHECK(r.out == "rows: 0  records: 0  errors: 0\n");

  CHECK(cli(dir, "batch --input missing.csv --output x.jsonl").code == 2);
  std::ofstream(dir / "header.csv") << "name,kind,w,h\n";
  CHECK(cli(dir, "batch --input header.csv --output x.jsonl").code == 2);
}

TEST_CASE("batch output is byte-identical across runs") {
  const auto dir = scratch("determinism");
  const std::string in = "'" + kData + "/reference_measurements.csv'";
  REQUIRE(cli(dir, "batch --input " + in + " --output a.jsonl --timestamp 1700000000").code == 0);
  REQUIRE(cli(dir, "batch --input " + in + " --output b.jsonl --timestamp 1700000000").code == 0);
  CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
  CHECK(!slurp(dir / "a.jsonl").empty());
}

TEST_CASE("export-curves") {
  const auto dir = scratch("curves");
  auto r = cli(dir, "export-curves --system eye --resolution 101 --output eye.csv");
  REQUIRE(r.code == 0);
  const auto text = slurp(dir / "eye.csv");
  CHECK(std::count(text.begin(), text.end(), '\n') == 102);
  CHECK(text.rfind("x,HBWP:Very Low,", 0) == 0);
  CHECK(cli(dir, "export-curves --system ear --output ear.csv").code == 2);
  CHECK(cli(dir, "export-curves --system eye --resolution 1 --output e.csv").code == 2);
}

TEST_CASE("validate-config, dump-config and config selection") {
  const auto dir = scratch("config");
  const std::string shipped = FZS_CONFIG_DIR "/default_config.json";
  auto r = cli(dir, "validate-config '" + shipped + "'");
  CHECK(r.code == 0);
  CHECK(r.out.find("valid") != std::string::npos);

  r = cli(dir, "dump-config");
  REQUIRE(r.code == 0);
  CHECK(r.out == slurp(shipped));

  std::ofstream(dir / "bad.json") << R"({"systems": {"eyebrow": {"input": {"peaks": [16, 29, 22, 36, 43]}}}})";
  r = cli(dir, "validate-config bad.json");
  CHECK(r.code == 2);
  CHECK(r.err.find("NonMonotonePeaks") != std::string::npos);
  CHECK(cli(dir, "validate-config missing.json").code == 2);

  std::ofstream(dir / "coarse.json") << R"({"engine": {"resolution": 501}})";
  r = cli(dir, "--config coarse.json dump-config");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"resolution\": 501") != std::string::npos);

  r = cli(dir, "dump-config", "FUZZYSHAPE_CONFIG=coarse.json");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"resolution\": 501") != std::string::npos);

  CHECK(cli(dir, "classify --kind lip --width 40 --height 40 --no-record", "FUZZYSHAPE_CONFIG=bad.json").code == 2);
}

TEST_CASE("calibrate reports agreement and writes a config") {
  const auto dir = scratch("calibrate");
  std::ofstream(dir / "rows.csv") << "id,kind,width_px,height_px,expected_label\n"
                                     "Eye-1,right_eye,48,24,Very Wide\nLip-4,lip,60,21,Wavy\n";
  const auto r = cli(dir, "calibrate --rows rows.csv --output tuned.json --log-level info");
  REQUIRE(r.code == 0);
  CHECK(r.out.find("agreement: 2/2") != std::string::npos);
  CHECK(r.err.find("calibrate") != std::string::npos);
  CHECK(cli(dir, "validate-config tuned.json").code == 0);
  CHECK(cli(dir, "--config tuned.json classify --kind lip --width 60 --height 21 --no-record").out.find(
            "dominant:    Wavy") != std::string::npos);
}
