// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Tolerances and runtime budgets are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "aoi/cli.hpp"
#include "aoi/core.hpp"
#include "aoi/optimizer.hpp"
#include "aoi/simulator.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace aoi;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

nlohmann::json cli_json(std::vector<std::string> args, Check& check) {
  args.push_back("--format");
  args.push_back("json");
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(args, out, err);
  check.require(status == 0, "exit status " + std::to_string(status) + ": " + err.str());
  return status == 0 ? nlohmann::json::parse(out.str()) : nlohmann::json{};
}

std::string cli_text(const std::vector<std::string>& args, Check& check) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(args, out, err);
  check.require(status == 0, "exit status " + std::to_string(status) + ": " + err.str());
  return out.str();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

double rho_star(double beta, double a) { return maximize_objective(beta, TradeoffWeight(a), 1.0).rho_star; }

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Check&)>& body) {
  Check check;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  check.require(elapsed < budget_s, "runtime " + fmt(elapsed) + " s exceeds " + fmt(budget_s) + " s");
  if (!check.ok) ++failures;
  std::printf("[%s] C%d %s (%.3f s)%s%s\n", check.ok ? "PASS" : "FAIL", id, title.c_str(), elapsed,
              check.detail.empty() ? "" : " -- ", check.detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  criterion(1, "Kaul-Yates optimum: optimize --beta 1 --a {0.1,1,10} -> 0.531 +- 1e-3", 1.0, [](Check& c) {
    for (const char* a : {"0.1", "1", "10"}) {
      const auto j = cli_json({"optimize", "--beta", "1", "--a", a}, c);
      const double r = j.value("rho_star", NAN);
      c.require(std::abs(r - 0.531) <= 1e-3, std::string("a=") + a + " rho*=" + fmt(r));
    }
  });

  criterion(2, "Asymptotic root: asymptote --a 1 -> 0.389 +- 1e-3; g(0)=a, g(1)=-(a+1)", 0.1, [](Check& c) {
    const auto j = cli_json({"asymptote", "--a", "1"}, c);
    const double r = j.value("rho_tilde", NAN);
    c.require(std::abs(r - 0.389) <= 1e-3, "rho_tilde=" + fmt(r));
    for (double a : {0.5, 1.0, 3.0}) {
      c.require(asymptotic_polynomial(0.0, TradeoffWeight(a)) == a, "g(0) != a for a=" + fmt(a));
      c.require(asymptotic_polynomial(1.0, TradeoffWeight(a)) == -(a + 1.0), "g(1) != -(a+1) for a=" + fmt(a));
    }
  });

  criterion(3, "1/beta limit: f(rho*) at a=1e-4 within 1% of 1/beta, beta in {0.2,0.5,0.9}", 1.0, [](Check& c) {
    for (double beta : {0.2, 0.5, 0.9}) {
      const double f = maximize_objective(beta, TradeoffWeight(1e-4), 1.0).objective_at_star;
      c.require(std::abs(f - 1.0 / beta) <= 0.01 / beta, "beta=" + fmt(beta) + " f*=" + fmt(f));
    }
  });

  criterion(4, "Ceiling and monotonicity over beta {0.05..1} x a {0.5,1,2}", 10.0, [](Check& c) {
    for (double a : {0.5, 1.0, 2.0}) {
      double previous = 0.0;
      for (int j = 1; j <= 20; ++j) {
        const double beta = 0.05 * j;
        const double r = rho_star(beta, a);
        c.require(r <= 0.531 + 1e-3, "ceiling a=" + fmt(a) + " beta=" + fmt(beta) + " rho*=" + fmt(r));
        c.require(r >= previous - 1e-4, "not monotone at a=" + fmt(a) + " beta=" + fmt(beta));
        previous = r;
      }
    }
  });

  criterion(5, "a -> inf limit: rho*(beta, a=100) within 1e-2 of 0.531", 1.0, [](Check& c) {
    for (double beta : {0.1, 0.5, 0.9}) {
      const double r = rho_star(beta, 100.0);
      c.require(std::abs(r - 0.531) <= 1e-2, "beta=" + fmt(beta) + " rho*=" + fmt(r));
    }
  });

  criterion(6, "a -> 0+ collapse: rho*(0.5, a) decreasing over a {1e-1,1e-2,1e-3}, < 0.1 at 1e-3", 1.0,
            [](Check& c) {
              const double r1 = rho_star(0.5, 1e-1);
              const double r2 = rho_star(0.5, 1e-2);
              const double r3 = rho_star(0.5, 1e-3);
              c.require(r1 > r2 && r2 > r3, "sequence " + fmt(r1) + ", " + fmt(r2) + ", " + fmt(r3));
              c.require(r3 < 0.1, "rho*(1e-3)=" + fmt(r3));
            });

  criterion(7, "Simulation vs theory: 10 x 1e6 arrivals at rho=0.5, beta=0.5", 60.0, [](Check& c) {
    const SimConfig config{SystemParams::from_load(0.5, 1.0, 0.5), 1'000'000, 0.1, 2024, 10};
    const SimResult r = run(config);
    const double delta_e = 5.0 + 1.0 / 12.0;
    c.require(std::abs(r.delta_b_hat - 3.5) <= 0.02 * 3.5, "delta_b_hat=" + fmt(r.delta_b_hat));
    c.require(r.delta_e_hat && std::abs(*r.delta_e_hat - delta_e) <= 0.03 * delta_e,
              "delta_e_hat=" + fmt(r.delta_e_hat.value_or(NAN)));
    c.require(std::abs(r.eavesdropped_fraction - 0.5) <= 0.005 * 0.5,
              "fraction=" + fmt(r.eavesdropped_fraction));
  });

  criterion(8, "Oracle equivalence: optimizer vs 1e-5 grid scan on 30 (beta, a) cells", 120.0, [](Check& c) {
    for (int j = 1; j <= 10; ++j) {
      const double beta = 0.1 * j;
      for (double a : {0.1, 1.0, 10.0}) {
        const double r = rho_star(beta, a);
        const double scan = oracle::grid_scan_argmax(beta, a, 1e-5).rho;
        c.require(std::abs(r - scan) <= 1e-4,
                  "beta=" + fmt(beta) + " a=" + fmt(a) + " rho*=" + fmt(r) + " scan=" + fmt(scan));
      }
    }
  });

  criterion(9, "Determinism: repeated sweep CSV and simulate --seed 42 are byte-identical", 120.0, [](Check& c) {
    const auto root = std::filesystem::temp_directory_path() / "aoi_acceptance_sweep";
    std::filesystem::remove_all(root);
    for (const char* figure : {"fig1", "fig2", "fig3", "fig4", "asymptote"}) {
      const std::string first = cli_text({"sweep", "--figure", figure, "--out", (root / "first").string()}, c);
      const std::string second = cli_text({"sweep", "--figure", figure, "--out", (root / "second").string()}, c);
      std::istringstream a(first);
      std::istringstream b(second);
      std::string pa;
      std::string pb;
      int files = 0;
      while (std::getline(a, pa) && std::getline(b, pb)) {
        c.require(std::filesystem::path(pa).filename() == std::filesystem::path(pb).filename(),
                  std::string("file names differ for ") + figure);
        c.require(slurp(pa) == slurp(pb), std::string("CSV differs for ") + figure);
        ++files;
      }
      c.require(files > 0, std::string("no output for ") + figure);
    }
    std::filesystem::remove_all(root);

    const std::vector<std::string> sim = {"simulate", "--rho", "0.5", "--beta", "0.5", "--seed", "42"};
    c.require(cli_text(sim, c) == cli_text(sim, c), "simulate --seed 42 output differs");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
