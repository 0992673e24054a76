// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "tuning/cli/commands.hpp"
#include "tuning/tuning.hpp"

#include "support/oracles.hpp"
#include "support/random_models.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace tuning;
using namespace tuning::testing;

namespace {

const std::string kData = TUNING_TEST_DATA_DIR;
const std::string kTune = TUNING_TUNE_BINARY;

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0 = no limit
  std::function<Verdict()> run;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::vector<RawChain> oracle_chains() {
  Rng rng(20240601);
  std::vector<RawChain> chains;
  for (int k = 0; k < 100; ++k) chains.push_back(random_chain(rng, 1 + k % 8));
  return chains;
}

Verdict fundamental_oracle() {
  double worst = 0.0;
  for (const auto& raw : oracle_chains()) {
    const auto chain = validate_chain(raw.p00, raw.p01);
    const auto m = fundamental_matrix(chain);
    const Dense p = to_dense(raw.p00);
    const auto oracle = neumann_series(p, neumann_terms(inf_norm(p), 1e-10));
    for (std::size_t i = 0; i < oracle.size(); ++i)
      for (std::size_t j = 0; j < oracle.size(); ++j)
        worst = std::max(worst, std::abs(m(i, j) - oracle[i][j]));
  }
  return {worst <= 1e-8, fmt("max entry error %.3g over 100 chains", worst)};
}

Verdict absorption_consistency() {
  const auto chains = oracle_chains();
  double worst_row = 0.0;
  std::vector<AbsorptionMatrix> b;
  std::vector<BlockTransitionMatrix> validated;
  for (const auto& raw : chains) {
    validated.push_back(validate_chain(raw.p00, raw.p01));
    b.push_back(absorption_probabilities(validated.back(), fundamental_matrix(validated.back())));
    const Matrix& v = b.back().values();
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      worst_row = std::max(worst_row, std::abs(v.row(i).sum() - 1.0));
  }
  Verdict verdict{worst_row <= 1e-9, fmt("max row-sum error %.3g", worst_row)};
  constexpr std::size_t kRuns = 1'000'000;
  for (std::size_t k : {3u, 44u, 87u}) {
    const auto est = estimate_absorption(validated[k], 0, kRuns, 500 + k);
    const double p = b[k].to_zero(0);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(kRuns));
    const double z = std::abs(est.to_zero - p) / se;
    verdict.pass = verdict.pass && z <= 3.0;
    verdict.detail += fmt("; chain %.0f z=%.2f", static_cast<double>(k), z);
  }
  return verdict;
}

Verdict reformulation_identity() {
  Rng rng(777);
  double worst = 0.0;
  for (auto tm : {TimeModel::Continuous, TimeModel::Discrete}) {
    for (int k = 0; k < 200; ++k) {
      const std::size_t n = random_size(rng, 1, 8);
      const auto model = random_model(rng, n, tm);
      const auto coeffs = coefficients(model);
      for (int p = 0; p < 50; ++p) {
        const auto policy = random_policy(rng, n);
        const double direct = evaluate_index(model, policy).value;
        const double via = evaluate_index_via_coefficients(coeffs, policy).value;
        worst = std::max(worst, relative_gap(direct, via));
      }
    }
  }
  return {worst <= 1e-12, fmt("max relative gap %.3g over 2 x 200 x 50", worst)};
}

Verdict degenerate_collapse() {
  Rng rng(4242);
  double worst = 0.0;
  std::size_t points = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = random_size(rng, 1, 8);
    const auto model = random_model(rng, n, k % 2 ? TimeModel::Discrete : TimeModel::Continuous);
    const auto coeffs = coefficients(model);
    for (std::size_t l0 = 0; l0 < n; ++l0) {
      for (std::size_t l1 = 0; l1 < n; ++l1) {
        const double index = evaluate_index(model, ControlPolicy::degenerate(n, l0, l1)).value;
        const std::array<std::size_t, 2> point{l0, l1};
        worst = std::max(worst, relative_gap(index, test_function(coeffs, point)));
        ++points;
      }
    }
  }
  return {worst <= 1e-12,
          fmt("max relative gap %.3g over %.0f grid points", worst, static_cast<double>(points))};
}

Verdict dominance() {
  Rng rng(1001);
  std::size_t violations = 0;
  for (int k = 0; k < 50; ++k) {
    const auto model = random_model(rng, random_size(rng, 1, 8), TimeModel::Continuous);
    violations += dominance_audit(model, 1000, 9000 + static_cast<std::uint64_t>(k)).violations();
  }
  return {violations == 0, fmt("%.0f violations over 50 models x 1000 policies",
                               static_cast<double>(violations))};
}

Verdict reference_model_end_to_end() {
  const auto model = reference_model();
  const ControlPolicy policy({1.0}, {1.0});
  const double index = evaluate_index(model, policy).value;
  Verdict verdict{relative_gap(index, 1.8) <= 1e-12, fmt("I=%.15g", index)};

  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::cmd_optimize(kData + "/reference_continuous.json", Sense::Maximize, {},
                                     out, err);
  const bool reported = code == cli::kExitOk &&
                        out.str().find("state_pair: (2, 2)") != std::string::npos &&
                        out.str().find("best_value: 1.80000000000") != std::string::npos;
  verdict.pass = verdict.pass && reported;
  verdict.detail += reported ? "; optimize reports (2, 2) at 1.8" : "; optimize report mismatch";

  SimulationConfig config;
  config.n_cycles = 100000;
  config.seed = 6;
  const auto est = simulate_index(model, policy, config);
  const double z = std::abs(est.point_estimate - 1.8) / est.standard_error;
  verdict.pass = verdict.pass && z <= 3.0;
  verdict.detail += fmt("; simulated %.6f, z=%.2f", est.point_estimate, z);
  return verdict;
}

Verdict scaling_laws() {
  Rng rng(31);
  double worst = 0.0;
  bool argmax_fixed = true;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = random_size(rng, 1, 8);
    const auto raw = random_chain(rng, n);
    const auto cont = random_continuous_parameters(rng, n);
    const auto disc = random_discrete_parameters(rng, n);
    const auto policy = random_policy(rng, n);
    const auto base_c = TuningModel::from_blocks(raw.p00, raw.p01, cont);
    const auto base_d = TuningModel::from_blocks(raw.p00, raw.p01, disc);
    const double ic = evaluate_index(base_c, policy).value;
    const double id = evaluate_index(base_d, policy).value;
    const auto best_c = optimize(base_c, Sense::Maximize).best_point;
    const auto best_d = optimize(base_d, Sense::Maximize).best_point;
    for (double s : {0.5, 2.0, 10.0}) {
      auto timed = cont;
      timed.tau *= s;
      timed.mu0 *= s;
      timed.mu1 *= s;
      auto paid = cont;
      paid.c *= s;
      paid.d0 *= s;
      paid.d1 *= s;
      auto paid_d = disc;
      paid_d.c *= s;
      paid_d.d0 *= s;
      paid_d.d1 *= s;
      const auto mt = TuningModel::from_blocks(raw.p00, raw.p01, timed);
      const auto mp = TuningModel::from_blocks(raw.p00, raw.p01, paid);
      const auto md = TuningModel::from_blocks(raw.p00, raw.p01, paid_d);
      worst = std::max(worst, relative_gap(evaluate_index(mt, policy).value, ic / s));
      worst = std::max(worst, relative_gap(evaluate_index(mp, policy).value, s * ic));
      worst = std::max(worst, relative_gap(evaluate_index(md, policy).value, s * id));
      argmax_fixed = argmax_fixed && optimize(mt, Sense::Maximize).best_point == best_c &&
                     optimize(mp, Sense::Maximize).best_point == best_c &&
                     optimize(md, Sense::Maximize).best_point == best_d;
    }
  }
  return {worst <= 1e-12 && argmax_fixed,
          fmt("max relative gap %.3g", worst) +
              (argmax_fixed ? "; best_point unchanged" : "; best_point moved")};
}

Verdict monte_carlo_agreement() {
  Rng rng(8080);
  int agree = 0;
  int law_checked = 0;
  int law_agree = 0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = random_size(rng, 1, 8);
    const auto model = random_model(rng, n, TimeModel::Continuous);
    const auto policy = random_policy(rng, n);
    const double analytic = evaluate_index(model, policy).value;
    SimulationConfig config;
    config.n_cycles = 100000;
    config.seed = 3000 + static_cast<std::uint64_t>(k);
    const auto det = simulate_index(model, policy, config);
    if (std::abs(det.point_estimate - analytic) <= 3.0 * det.standard_error) ++agree;
    if (k < 5) {
      config.holding_time_law = HoldingTimeLaw::ExponentialMean;
      const auto exp = simulate_index(model, policy, config);
      const double combined = std::hypot(det.standard_error, exp.standard_error);
      ++law_checked;
      if (std::abs(det.point_estimate - exp.point_estimate) <= 3.0 * combined) ++law_agree;
    }
  }
  return {agree >= 19 && law_agree == law_checked,
          fmt("%.0f/20 within 3 SE; holding law %.0f/%.0f", agree, law_agree, law_checked)};
}

struct Spawned {
  int status;
  std::string out;
};

Spawned spawn(const std::string& command) {
  Spawned result{-1, {}};
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return result;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
  result.status = pclose(pipe);
  return result;
}

Verdict determinism() {
  const std::string m = kData + "/three_state.json";
  const std::string p = kData + "/three_state_policy.json";
  const std::vector<std::string> commands = {
      "validate " + m,
      "evaluate " + m + " " + p,
      "optimize " + m + " --sense max",
      "optimize " + m + " --sense min",
      "simulate " + m + " " + p + " --cycles 20000 --seed 5",
      "simulate " + m + " " + p + " --cycles 20000 --seed 5 --law exp",
      "surface " + m,
  };
  Verdict verdict{true, {}};
  int identical = 0;
  for (const auto& c : commands) {
    const auto a = spawn(kTune + " " + c);
    const auto b = spawn(kTune + " " + c);
    if (a.status == 0 && a.status == b.status && a.out == b.out && !a.out.empty()) {
      ++identical;
    } else {
      verdict.pass = false;
      verdict.detail += "differs: " + c + "; ";
    }
  }
  verdict.detail += fmt("%.0f/%.0f commands byte-identical", identical,
                        static_cast<double>(commands.size()));

  const std::string sim = "simulate " + m + " " + p + " --cycles 20000 --seed 5";
  const auto one = spawn("TUNE_NUM_THREADS=1 " + kTune + " " + sim);
  const auto four = spawn("TUNE_NUM_THREADS=4 " + kTune + " " + sim);
  const bool cli_invariant = one.status == 0 && one.out == four.out;

  Rng rng(99);
  const auto model = random_model(rng, 6, TimeModel::Continuous);
  const auto policy = random_policy(rng, 6);
  SimulationConfig config;
  config.n_cycles = 50000;
  config.seed = 12;
  config.holding_time_law = HoldingTimeLaw::ExponentialMean;
  setenv(kThreadsEnvVar, "1", 1);
  const auto s1 = simulate_index(model, policy, config);
  setenv(kThreadsEnvVar, "4", 1);
  const auto s4 = simulate_index(model, policy, config);
  unsetenv(kThreadsEnvVar);
  const bool lib_invariant = s1.point_estimate == s4.point_estimate &&
                             s1.standard_error == s4.standard_error &&
                             s1.total_steps == s4.total_steps;

  verdict.pass = verdict.pass && cli_invariant && lib_invariant;
  verdict.detail += std::string("; threads 1 vs 4: CLI ") +
                    (cli_invariant ? "identical" : "differs") + ", library " +
                    (lib_invariant ? "identical" : "differs");
  return verdict;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "fundamental matrix vs Neumann series", 5.0, fundamental_oracle},
      {2, "absorption row sums and Monte Carlo", 30.0, absorption_consistency},
      {3, "index reformulation identity", 10.0, reformulation_identity},
      {4, "degenerate policy collapse", 0.0, degenerate_collapse},
      {5, "grid dominance over sampled policies", 30.0, dominance},
      {6, "reference model end to end", 10.0, reference_model_end_to_end},
      {7, "time and reward scaling", 0.0, scaling_laws},
      {8, "Monte Carlo agreement", 120.0, monte_carlo_agreement},
      {9, "determinism", 0.0, determinism},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0.0 && secs > c.time_limit_s) {
      v.pass = false;
      v.detail += fmt("; over time limit %.0f s", c.time_limit_s);
    }
    if (!v.pass) ++failed;
    std::printf("%s [%d] %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
