#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& workdir) {
  const std::string cmd = std::string(MCMDENS_PATH) + " " + args + " > " + workdir +
                          "/stdout.txt 2> " + workdir + "/stderr.txt";
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WEXITSTATUS(status);
  std::ifstream in(workdir + "/stdout.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  res.out = ss.str();
  return res;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& tag) {
  const std::string dir = std::string("cli_scratch_") + tag;
  if (std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) != 0)
    throw std::runtime_error("cannot prepare scratch dir " + dir);
  return dir;
}

}  // namespace

TEST_CASE("cli build: level table with exact fractions") {
  const std::string dir = temp_dir("build");
  const RunResult r =
      run_cli("--delta 1/3 --gamma 1/100 --depth 1 --out " + dir + " build", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("9/800") != std::string::npos);
  CHECK(r.out.find("891/100") != std::string::npos);
  const std::string levels = slurp(dir + "/levels.csv");
  CHECK(levels.find("level,s_fraction") == 0);
  CHECK(slurp(dir + "/validation.json").find("\"ok\": true") != std::string::npos);
}

TEST_CASE("cli: invalid configuration exits 2 with machine-readable stderr") {
  const std::string dir = temp_dir("badcfg");
  const RunResult r =
      run_cli("--delta 1/3 --gamma 1/100 --branching 7 --depth 2 --out " + dir + " build", dir);
  CHECK(r.exit_code == 2);
  const std::string err = slurp(dir + "/stderr.txt");
  CHECK(err.find("\"error\"") != std::string::npos);
  CHECK(err.find("annulus-positivity") != std::string::npos);

  const RunResult unknown = run_cli("--delta 1/3 --no-such-flag build", dir);
  CHECK(unknown.exit_code == 2);
}

TEST_CASE("cli verify: zero violations on the default schedule") {
  const std::string dir = temp_dir("verify");
  const RunResult r = run_cli("--delta 1/3 --gamma 1/100 --depth 2 --out " + dir + " verify", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0 violations") != std::string::npos);
  // derived schedule picks n_2 = 406, so 1 + 8*406-8 units
  CHECK(r.out.find("3241 units checked") != std::string::npos);
  CHECK(slurp(dir + "/constraints.json").find("\"ok\": true") != std::string::npos);
}

TEST_CASE("cli raster: CSV re-read sums to total mass within export precision") {
  const std::string dir = temp_dir("raster");
  const int m = 16;
  const RunResult r = run_cli("--delta 1/3 --gamma 1/100 --depth 1 --out " + dir +
                                  " raster --resolution 16 --mode cell-average",
                              dir);
  CHECK(r.exit_code == 0);

  std::ifstream csv(dir + "/density.csv");
  std::string line;
  std::getline(csv, line);  // header
  double total = 0;
  int rows = 0;
  while (std::getline(csv, line)) {
    const auto last = line.rfind(',');
    total += std::stod(line.substr(last + 1));
    ++rows;
  }
  CHECK(rows == m * m);
  CHECK(std::fabs(total / (m * m) - 1.0) <= 1e-12);

  const std::string pgm = slurp(dir + "/density.pgm");
  CHECK(pgm.find("P2\n16 16\n65535\n") == 0);
  CHECK(slurp(dir + "/raster.json").find("\"maxval\": 65535") != std::string::npos);
}

TEST_CASE("cli bounds: witness json with contradiction") {
  const std::string dir = temp_dir("bounds");
  const RunResult r = run_cli("--delta 1/28 --gamma 1/200 --depth 1 --out " + dir +
                                  " bounds --K 2 --N-grid 700,7000",
                              dir);
  CHECK(r.exit_code == 0);
  const std::string witness = slurp(dir + "/witness.json");
  CHECK(witness.find("\"contradiction\": true") != std::string::npos);
  const std::string kstar = slurp(dir + "/kstar.csv");
  CHECK(kstar.find("N,K_star") == 0);
}

TEST_CASE("cli net: reproducible byte-identical outputs") {
  const std::string dir1 = temp_dir("net1");
  const std::string dir2 = temp_dir("net2");
  CHECK(run_cli("--delta 1/3 --gamma 3/10 --depth 1 --seed 7 --out " + dir1 + " net --scale 16",
                dir1)
            .exit_code == 0);
  // same config + seed => byte-identical artifacts
  RunResult second = run_cli("--delta 1/3 --gamma 3/10 --depth 1 --seed 7 --out " + dir2 +
                                 " net --scale 16",
                             dir2);
  CHECK(second.exit_code == 0);
  CHECK(slurp(dir1 + "/net.csv") == slurp(dir2 + "/net.csv"));
  CHECK(slurp(dir1 + "/net.json") == slurp(dir2 + "/net.json"));
}

TEST_CASE("cli probe: distortion table over depths") {
  const std::string dir = temp_dir("probe");
  const RunResult r = run_cli("--delta 1/15 --gamma 1/20 --branching 84 --depth 2 --out " + dir +
                                  " probe --resolution 64 --pairs 2000",
                              dir);
  CHECK(r.exit_code == 0);
  const std::string table = slurp(dir + "/distortion.csv");
  CHECK(table.find("depth,m,K_emp") == 0);
  // one row per depth plus the header
  CHECK(std::count(table.begin(), table.end(), '\n') == 3);
  CHECK(slurp(dir + "/probe.json").find("replay") != std::string::npos);
  CHECK(slurp(dir + "/replay.csv").find("block,nice") == 0);
}
