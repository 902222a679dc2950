// End-to-end checks of the installed CLI: exit codes, output headers,
// determinism, and the documented failure modes. The binary path comes in
// through MILNE_CLI_PATH (set by CMake).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("milne_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::ofstream cfg(dir / "ref.json");
    cfg << R"({"potential":{"type":"harmonic","m":1.0,"omega":1.0},)"
        << R"("grid":{"xmin":-12.0,"xmax":12.0,"n":4001},"hbar":1.0})";
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string config() const { return (dir / "ref.json").string(); }
  std::string out(const std::string& name) const {
    return (dir / name).string();
  }
};

int run(const std::string& args) {
  const std::string cmd = std::string(MILNE_CLI_PATH) + " " + args +
                          " > /dev/null 2> /dev/null";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("eigen emits the spectrum as JSON") {
  Sandbox sb;
  REQUIRE(run("eigen --config " + sb.config() + " --nmax 5 --out " +
              sb.out("eig.json")) == 0);
  const auto text = slurp(sb.out("eig.json"));
  CHECK(text.find("\"eigenvalues\"") != std::string::npos);
  CHECK(text.find("0.5") != std::string::npos);
  CHECK(text.find("5.5") != std::string::npos);
}

TEST_CASE("ampphase CSV: header and determinism") {
  Sandbox sb;
  const std::string base = "ampphase --config " + sb.config() +
                           " --energy 4.9 --c-policy co --out ";
  REQUIRE(run(base + sb.out("a.csv")) == 0);
  REQUIRE(run(base + sb.out("b.csv")) == 0);
  const auto a = slurp(sb.out("a.csv"));
  CHECK(first_line(a) == "x,u1,u2,alpha,phi,dphi");
  CHECK(a == slurp(sb.out("b.csv")));  // bit-identical across reruns
}

TEST_CASE("scan-phase CSV covers the requested quantum numbers") {
  Sandbox sb;
  REQUIRE(run("scan-phase --config " + sb.config() +
              " --nmin 3.2 --nmax 4.3 --steps 4 --out " + sb.out("s.csv")) ==
          0);
  const auto text = slurp(sb.out("s.csv"));
  CHECK(first_line(text) == "E,nE,phi_total_over_pi,c_used");
  // four data rows
  int rows = -1;
  for (char ch : text)
    if (ch == '\n') ++rows;
  CHECK(rows == 4);
}

TEST_CASE("action emits JSON with the listed keys") {
  Sandbox sb;
  REQUIRE(run("action --config " + sb.config() + " --energy 4.9 --out " +
              sb.out("act.json")) == 0);
  const auto text = slurp(sb.out("act.json"));
  for (const char* key : {"J_classical", "J_quantal_co", "period"})
    CHECK(text.find(key) != std::string::npos);
}

TEST_CASE("figure exports") {
  Sandbox sb;
  REQUIRE(run("fig1 --config " + sb.config() + " --out " + sb.out("f1.csv")) ==
          0);
  CHECK(first_line(slurp(sb.out("f1.csv"))) ==
        "x,Q_co,alpha_co,alpha_minus_co");
  REQUIRE(run("fig2 --config " + sb.config() + " --out " + sb.out("f2.csv")) ==
          0);
  CHECK(first_line(slurp(sb.out("f2.csv"))) ==
        "x,p_classical,hbar_dphi_co,hbar_dphi_generic");
}

TEST_CASE("expand emits the term columns") {
  Sandbox sb;
  REQUIRE(run("expand --config " + sb.config() +
              " --energy 4.9 --order 2 --hbar-eff 1.0 --out " +
              sb.out("e.csv")) == 0);
  CHECK(first_line(slurp(sb.out("e.csv"))) ==
        "x,a0,f0,f2,a2,residual_order0,residual_order2");
}

TEST_CASE("failure modes: exit 1 on config trouble, no partial output") {
  Sandbox sb;
  CHECK(run("eigen --config /nonexistent.json --out " + sb.out("x.json")) == 1);
  CHECK_FALSE(fs::exists(sb.out("x.json")));
  CHECK(run("ampphase --config " + sb.config() + " --c-policy bogus --energy 1 --out " +
            sb.out("y.csv")) == 1);
  CHECK_FALSE(fs::exists(sb.out("y.csv")));
  CHECK(run("nonsense --config " + sb.config()) == 1);
}

TEST_CASE("failure modes: exit 2 on numerical trouble") {
  Sandbox sb;
  // c(E) at an eigenvalue is degenerate
  CHECK(run("ampphase --config " + sb.config() +
            " --energy 3.5 --c-policy of_energy --out " + sb.out("z.csv")) ==
        2);
  CHECK_FALSE(fs::exists(sb.out("z.csv")));
}
