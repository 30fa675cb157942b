#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "ldacert/field.hpp"

using namespace ldacert;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the tool through the shell; stderr is folded into out when merge is set.
Run run(const std::string& args, const std::string& env = "", bool merge = false) {
  const std::string cmd = env + (env.empty() ? "" : " ") + LDA_CERT_EXE + std::string(" ") + args +
                          (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / ("lda_cert_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

const std::string kGaussian = "certify --density builtin:gaussian,sigma=1,mass=1 --p 4 --theta 0.5";

}  // namespace

TEST_CASE("certify emits a JSON certificate") {
  const Run r = run(kGaussian);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["epsilon_star"].get<double>() > 0.0);
  CHECK(j["params"]["p"] == 4.0);
  CHECK(j["params"]["C"] == 1.0);
  CHECK(j["constants"]["c_TF"].get<double>() == doctest::Approx(9.1156).epsilon(1e-5));
  CHECK(j["constants"].contains("c_LO"));
  CHECK(j["params"].contains("kappa1"));
  const auto band = j["band"];
  CHECK(band[0].get<double>() <= j["lda"].get<double>());
  CHECK(j["lda"].get<double>() <= band[1].get<double>());
}

TEST_CASE("certify output is byte-identical across runs and thread counts") {
  const Run a = run(kGaussian);
  const Run b = run(kGaussian);
  const Run c = run(kGaussian, "LDA_CERT_THREADS=1");
  const Run d = run(kGaussian, "LDA_CERT_THREADS=3");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  CHECK(a.out == d.out);

  const std::string bump = "certify --density builtin:bump,radius=2,mass=1.5 --grid-n 32";
  const Run e = run(bump, "LDA_CERT_THREADS=1");
  const Run f = run(bump, "LDA_CERT_THREADS=2");
  REQUIRE(e.code == 0);
  CHECK(e.out == f.out);
}

TEST_CASE("exit codes") {
  const Run p3 = run("certify --density builtin:gaussian,sigma=1,mass=1 --p 3 --theta 0.5", "", true);
  CHECK(p3.code == 2);
  CHECK(p3.out.find("p > 3") != std::string::npos);
  CHECK(run("certify --density builtin:gaussian --theta 0.9").code == 2);
  CHECK(run("certify --density builtin:gaussian --variant classical --theta 0.3").code == 2);
  CHECK(run("certify --density builtin:gaussian --bogus 1").code == 2);
  CHECK(run("certify").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("certify --density builtin:teapot").code == 2);
  CHECK(run("certify --density /nonexistent/density.grid").code == 2);
  CHECK(run(kGaussian, "LDA_CERT_THREADS=zero").code == 2);
  CHECK(run("scaling --N 1e4:1e12").code == 2);
  CHECK(run("tile --tile 24 --out /dev/null").code == 2);
  // an unreachable quadrature target is an accuracy failure
  CHECK(run("certify --density builtin:bump,radius=2,mass=1 --rel-tol 1e-300").code == 3);
  CHECK(run("--help").code == 0);
}

TEST_CASE("malformed grid files are rejected") {
  const fs::path d = scratch_dir();
  const fs::path bad = d / "bad.grid";
  {
    std::ofstream o(bad);
    o << "NOT-A-GRID 1\n2 2 2\n";
  }
  const Run r = run("certify --density " + bad.string(), "", true);
  CHECK(r.code == 2);
  CHECK_FALSE(r.out.empty());
  fs::remove_all(d);
}

TEST_CASE("tile output round-trips bit-exactly") {
  const fs::path d = scratch_dir();
  const fs::path a = d / "chi.grid", b = d / "chi_copy.grid";
  const Run r = run("tile --ell 4 --delta 0.5 --tile 3 --n 24 --out " + a.string());
  REQUIRE(r.code == 0);
  const auto meta = nlohmann::json::parse(r.out);
  CHECK(meta["tile"] == 3);

  const ScalarField f = read_grid_file(a.string());
  CHECK(f.spec.n == std::array<int, 3>{24, 24, 24});
  write_grid_file(b.string(), f);
  CHECK(slurp(a) == slurp(b));
  const ScalarField g = read_grid_file(b.string());
  CHECK(g.values == f.values);
  CHECK(g.spec.h == f.spec.h);
  CHECK(g.spec.origin == f.spec.origin);

  // the written field certifies as a density
  const Run c = run("certify --density " + a.string() + " --grid-n 32");
  CHECK(c.code == 0);
  fs::remove_all(d);
}

TEST_CASE("scaling command reports the rate") {
  const Run q = run("scaling --variant quantum --p 4 --theta 0.5 --N 1e4:1e12:6");
  REQUIRE(q.code == 0);
  const auto j = nlohmann::json::parse(q.out);
  CHECK(std::abs(j["slope"].get<double>() - 11.0 / 12.0) <= 0.01);
  CHECK(j["points"].size() == 6);
  const Run c = run("scaling --variant classical --p 4 --theta 0.5 --N 1e4:1e12:6");
  REQUIRE(c.code == 0);
  CHECK(std::abs(nlohmann::json::parse(c.out)["slope"].get<double>() - 5.0 / 6.0) <= 0.01);
}

TEST_CASE("verify prints one line per check and aggregates the status") {
  const Run r = run("verify --suite kinetic");
  std::istringstream lines(r.out);
  std::string line, last;
  int fails = 0, checks = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("PASS kinetic/", 0) == 0 || line.rfind("FAIL kinetic/", 0) == 0) {
      ++checks;
      if (line[0] == 'F') ++fails;
    }
    last = line;
  }
  CHECK(checks > 0);
  CHECK(last == (fails == 0 ? "PASS suite kinetic" : "FAIL suite kinetic"));
  CHECK(r.code == (fails == 0 ? 0 : 3));
  CHECK(run("verify --suite nothing").code == 2);
}

TEST_CASE("info lists constants and tolerances") {
  const Run r = run("info");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["constants"].contains("c_TF"));
  CHECK(j["tolerances"].size() >= 10);
  CHECK(j["suites"].size() == 4);
}
