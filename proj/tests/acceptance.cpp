// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "qdice/adversary.hpp"
#include "qdice/dicer.hpp"
#include "qdice/fairness.hpp"
#include "qdice/wcf.hpp"

using namespace qdice;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double time_limit_s, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (time_limit_s > 0 && elapsed > time_limit_s) {
    v.pass = false;
    v.detail += " (over time limit of " + std::to_string(time_limit_s) + " s)";
  }
  if (!v.pass) ++failures;
  std::printf("%s %2d %-40s %s [%.3f s]\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str(), elapsed);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double sigma(double p, std::uint64_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

unsigned hw_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string run_cli(const std::string& args, int* code) {
  static int counter = 0;
  const fs::path out = fs::temp_directory_path() / ("qdice_accept_" + std::to_string(::getpid()) + "_" +
                                                    std::to_string(counter++));
  const int status = std::system((std::string(QDICE_CLI_PATH) + " " + args + " >" + out.string() + " 2>/dev/null").c_str());
  *code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  fs::remove(out);
  return ss.str();
}

}  // namespace

int main() {
  criterion(1, "balanced coin fairness", 1.0, [] {
    const auto s = fairness::solve_balanced();
    const double eta = (std::sqrt(2.0) - 1) / 2, pa = 1 / std::sqrt(2.0);
    const bool ok = std::abs(s.eta_star - eta) < 1e-6 && std::abs(s.lhs - pa) < 1e-6 && std::abs(s.rhs - pa) < 1e-6;
    return Verdict{ok, fmt("eta*=%.9f P_A*=%.9f P_B*=%.9f", s.eta_star, s.lhs, s.rhs)};
  });

  criterion(2, "three-sided dice, case 1", 1.0, [] {
    const auto s = dicer::optimize_three_sided(1);
    const bool ok = std::abs(s.common_losing - 0.848) <= 0.001 && std::abs(s.bias - 0.181) <= 0.001;
    return Verdict{ok, fmt("eta*=%.6f losing=%.6f bias=%.6f", s.fairness.eta_star, s.common_losing, s.bias)};
  });

  criterion(3, "three-sided dice, case 2", 1.0, [] {
    const auto sq = dicer::optimize_three_sided(2, dicer::BracketReading::Squared);
    const auto lit = dicer::optimize_three_sided(2, dicer::BracketReading::Literal);
    const bool ok = std::abs(sq.bias - 0.199) <= 0.001 && std::abs(lit.bias - 0.199) > 0.001;
    return Verdict{ok, fmt("bias squared=%.6f literal=%.6f", sq.bias, lit.bias)};
  });

  criterion(4, "brute force matches closed form", 60.0, [] {
    constexpr int kGrid = 50;
    std::vector<double> err(kGrid * kGrid, 0.0);
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < hw_threads(); ++t) {
      pool.emplace_back([&] {
        for (int k; (k = next++) < kGrid * kGrid;) {
          const double p = (k / kGrid + 0.5) / kGrid;
          const double eta = (1 - p) * (k % kGrid) / (kGrid - 1);
          const auto params = wcf::ProtocolParams::make(p, eta);
          const double closed = adversary::alice_optimal_value(params).value;
          const double brute = adversary::brute_force_alice(params, {10000, true, 0, 0}, 1).value;
          err[static_cast<std::size_t>(k)] = std::abs(closed - brute);
        }
      });
    }
    pool.clear();
    const double worst = *std::max_element(err.begin(), err.end());
    return Verdict{worst <= 1e-6, fmt("max |closed - brute| = %.3e over %d points", worst, kGrid * kGrid)};
  });

  criterion(5, "no advantage from ancilla or phases", 0.0, [] {
    constexpr int kPoints = 20, kSamples = 10000;
    std::mt19937_64 pick(2024);
    double worst = -INFINITY;
    for (int i = 0; i < kPoints; ++i) {
      const double p = std::uniform_real_distribution<double>(0.02, 0.98)(pick);
      const double eta = std::uniform_real_distribution<double>(0.0, 1.0 - p)(pick);
      const auto params = wcf::ProtocolParams::make(p, eta);
      const double closed = adversary::alice_optimal_value(params).value;
      auto rng = substream(99, static_cast<std::uint64_t>(i));
      for (int s = 0; s < kSamples; ++s) {
        const auto strategy = adversary::random_strategy(rng, 2);
        worst = std::max(worst, adversary::alice_success_probability(params, strategy) - closed);
      }
    }
    return Verdict{worst <= 1e-9, fmt("max(sampled - closed) = %.3e over %d states", worst, kPoints * kSamples)};
  });

  criterion(6, "honest Monte Carlo", 0.0, [] {
    constexpr std::uint64_t kTrials = 100000;
    bool ok = true;
    std::string detail;
    const double pts[3][2] = {{0.5, 0.2071}, {1.0 / 3, 0.1465}, {2.0 / 3, 0.199}};
    for (const auto& [p, eta] : pts) {
      const auto s = wcf::run_trials(wcf::ProtocolParams::make(p, eta), wcf::Honest{}, kTrials, 6, hw_threads());
      const double f = s.frequency(s.alice_wins);
      ok = ok && std::abs(f - (1 - p)) <= 3 * sigma(1 - p, kTrials) && s.aborts == 0;
      detail += fmt("p=%.4f: %.5f/%.5f aborts=%llu; ", p, f, 1 - p, static_cast<unsigned long long>(s.aborts));
    }
    return Verdict{ok, detail};
  });

  criterion(7, "Bob claims the win at balanced fairness", 0.0, [] {
    constexpr std::uint64_t kTrials = 100000;
    const double eta = fairness::solve_balanced().eta_star;
    const auto s = wcf::run_trials(wcf::ProtocolParams::make(0.5, eta), wcf::BobClaimWin{}, kTrials, 7, hw_threads());
    const double f = s.frequency(s.bob_wins);
    return Verdict{std::abs(f - 0.7071) <= 3 * sigma(0.7071, kTrials), fmt("Bob frequency %.5f", f)};
  });

  criterion(8, "composition identities", 0.0, [] {
    bool exact = true;
    for (int n_parties = 2; n_parties <= 16; ++n_parties) {
      for (int party = 1; party <= n_parties; ++party) {
        const std::vector<double> zeros(static_cast<std::size_t>(dicer::stages_for_party(party, n_parties)), 0.0);
        exact = exact && dicer::worst_case_losing_prob(party, n_parties, zeros) ==
                             static_cast<double>(n_parties - 1) / n_parties;
      }
    }
    std::mt19937_64 rng(8);
    int held = 0;
    for (int i = 0; i < 1000; ++i) {
      const int n_parties = std::uniform_int_distribution<int>(2, 16)(rng);
      const int party = std::uniform_int_distribution<int>(1, n_parties)(rng);
      std::uniform_real_distribution<double> u(0.0, 1.0 / n_parties);
      std::vector<double> d(static_cast<std::size_t>(dicer::stages_for_party(party, n_parties)));
      for (double& x : d) x = u(rng);
      const auto b = dicer::bias_bound_check(party, n_parties, d);
      const double independent = oracle::ladder_losing_sum(party, n_parties, d) - (n_parties - 1.0) / n_parties;
      if (b.holds && b.epsilon <= b.bound && std::abs(independent - b.epsilon) < 1e-12) ++held;
    }
    return Verdict{exact && held == 1000, fmt("exact zero-bias identity: %s, bound held on %d/1000", exact ? "yes" : "no", held)};
  });

  criterion(9, "dice Monte Carlo", 0.0, [] {
    constexpr std::uint64_t kTrials = 90000;
    const auto honest = dicer::simulate_dice(dicer::LadderSpec::three_sided(1, dicer::optimize_three_sided(1).fairness.eta_star),
                                             {}, kTrials, 9, hw_threads());
    bool ok = true;
    std::string detail = "honest:";
    for (int n = 1; n <= 3; ++n) {
      ok = ok && std::abs(honest.frequency(n) - 1.0 / 3) <= 3 * sigma(1.0 / 3, kTrials);
      detail += fmt(" %.5f", honest.frequency(n));
    }
    const auto spec = dicer::LadderSpec::three_sided(1, dicer::optimize_three_sided(1).fairness.eta_star);
    const auto attacked = dicer::simulate_dice(spec, {{2, 3}}, kTrials, 10, hw_threads());
    const double losing = 1.0 - attacked.frequency(1);
    ok = ok && std::abs(losing - 0.848) <= 3 * sigma(0.848, kTrials);
    return Verdict{ok, detail + fmt("; honest Alice loses %.5f", losing)};
  });

  criterion(10, "CLI determinism", 0.0, [] {
    const char* invocations[] = {
        "simulate --p 0.5 --eta 0.2071068 --cheat bob-claim-win --trials 20000 --seed 3",
        "simulate --p 0.4 --eta 0.2 --cheat alice-delta --trials 20000 --seed 3 --threads 4",
        "simulate --dice 3 --case 2 --honest-party 3 --trials 20000 --seed 12 --format csv",
        "simulate --dice 5 --honest-party 2 --trials 20000 --seed 1",
        "cheat --p 0.25 --eta 0.3",
        "solve dice3-case2",
        "bound-check --dice 4 --party 2 --biases 0.1,0.05,0.02",
    };
    int same = 0, total = 0;
    for (const char* args : invocations) {
      int c1 = 0, c2 = 0;
      const std::string a = run_cli(args, &c1), b = run_cli(args, &c2);
      ++total;
      if (c1 == 0 && c2 == 0 && !a.empty() && a == b) ++same;
    }
    return Verdict{same == total, fmt("%d/%d invocations byte-identical", same, total)};
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
