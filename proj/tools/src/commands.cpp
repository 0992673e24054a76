#include "tuning/cli/commands.hpp"

#include "tuning/cli/model_io.hpp"
#include "tuning/errors.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>

namespace tuning::cli {

namespace {

std::string format_with(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string pair(std::size_t a, std::size_t b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

const char* time_model_name(TimeModel t) {
  return t == TimeModel::Continuous ? "continuous" : "discrete";
}

const char* index_unit(TimeModel t) {
  return t == TimeModel::Continuous ? "per unit time" : "per control cycle";
}

void print_vector(std::ostream& out, const char* title, const Vector& v) {
  out << title << ":\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << "  state " << i + kStateLabelOffset << ": " << format_report(v[i]) << '\n';
  }
}

void print_matrix(std::ostream& out, const char* title, const Matrix& m) {
  out << title << ":\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << "  state " << i + kStateLabelOffset << ":";
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ' ' << format_report(m(i, j));
    out << '\n';
  }
}

void print_warnings(std::ostream& err, const TuningModel& model) {
  for (const auto& w : model.warnings()) err << "warning: " << w << '\n';
}

/// Runs a command body and maps failures onto exit statuses.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::UnstableModel ? kExitUnstable : kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace

std::string format_report(double v) { return format_with("%#.12g", v); }
std::string format_csv(double v) { return format_with("%.12g", v); }

int cmd_validate(const std::filesystem::path& model_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelFile file = load_model(model_path);
    const TuningModel& model = file.model;
    print_warnings(err, model);

    if (!file.name.empty()) out << "name: " << file.name << '\n';
    out << "time_model: " << time_model_name(model.time_model()) << '\n';
    out << "n_internal: " << model.n_internal() << '\n';
    out << "state_labels: " << kStateLabelOffset << ".." << model.n_internal() + 1 << '\n';
    print_matrix(out, "fundamental_matrix", model.fundamental().values());
    print_matrix(out, "absorption [b0 b1]", model.absorption().values());
    print_vector(out, "time_to_absorption", model.time_to_absorption());
    print_vector(out, "reward_to_absorption", model.reward_to_absorption());

    const auto& report = model.stability();
    out << "stable: " << (report.stable() ? "true" : "false") << '\n';
    for (const auto& v : report.violations) {
      out << "  violation: state " << v.state + kStateLabelOffset << " reaches boundary "
          << v.boundary << " with probability " << format_report(v.probability) << '\n';
    }
    return report.stable() ? kExitOk : kExitUnstable;
  });
}

int cmd_evaluate(const std::filesystem::path& model_path,
                 const std::filesystem::path& policy_path, const CommonFlags& flags,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelFile file = load_model(model_path);
    print_warnings(err, file.model);
    const ControlPolicy policy = load_policy(policy_path);
    const IndexValue v = evaluate_index(file.model, policy, {flags.allow_unstable});
    out << "value: " << format_report(v.value) << '\n';
    out << "numerator: " << format_report(v.numerator) << '\n';
    out << "denominator: " << format_report(v.denominator) << '\n';
    out << "unit: " << index_unit(file.model.time_model()) << '\n';
    return kExitOk;
  });
}

int cmd_optimize(const std::filesystem::path& model_path, Sense sense, const CommonFlags& flags,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelFile file = load_model(model_path);
    print_warnings(err, file.model);
    OptimizeOptions options;
    options.evaluation.allow_unstable = flags.allow_unstable;
    const OptimizationResult r = optimize(file.model, sense, options);
    const auto labels = r.state_labels();

    out << "sense: " << (sense == Sense::Maximize ? "max" : "min") << '\n';
    out << "best_point: " << pair(r.best_point[0], r.best_point[1]) << '\n';
    out << "state_pair: " << pair(labels[0], labels[1]) << '\n';
    out << "best_value: " << format_report(r.best_value) << '\n';
    out << "ties: " << r.ties.size() << '\n';
    for (const auto& t : r.ties) {
      out << "  " << pair(t[0], t[1]) << " labels "
          << pair(t[0] + kStateLabelOffset, t[1] + kStateLabelOffset) << '\n';
    }
    return kExitOk;
  });
}

int cmd_simulate(const std::filesystem::path& model_path,
                 const std::filesystem::path& policy_path, const SimulateFlags& sim,
                 const CommonFlags& flags, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelFile file = load_model(model_path);
    print_warnings(err, file.model);
    const ControlPolicy policy = load_policy(policy_path);

    SimulationConfig config;
    config.n_cycles = sim.cycles;
    config.seed = sim.seed;
    config.holding_time_law = sim.law;
    config.evaluation.allow_unstable = flags.allow_unstable;
    const SimulationEstimate est = simulate_index(file.model, policy, config);
    const double analytic = evaluate_index(file.model, policy, config.evaluation).value;
    const double gap = std::abs(analytic - est.point_estimate);

    out << "point_estimate: " << format_report(est.point_estimate) << '\n';
    out << "standard_error: " << format_report(est.standard_error) << '\n';
    out << "cycles: " << est.n_cycles << '\n';
    out << "batches: " << est.batches_used << '\n';
    out << "analytic: " << format_report(analytic) << '\n';
    out << "abs_error: " << format_report(gap) << '\n';
    if (est.insufficient_batches) {
      out << "z_score: n/a (insufficient batches)\n";
    } else if (est.standard_error > 0.0) {
      out << "z_score: " << format_report(gap / est.standard_error) << '\n';
    } else {
      out << "z_score: " << (gap == 0.0 ? format_report(0.0) : std::string("inf")) << '\n';
    }
    if (file.model.time_model() == TimeModel::Discrete) {
      out << "per_step_estimate: " << format_report(est.per_step_estimate) << '\n';
    }
    return kExitOk;
  });
}

int cmd_surface(const std::filesystem::path& model_path,
                const std::optional<std::filesystem::path>& out_path, const CommonFlags& flags,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ModelFile file = load_model(model_path);
    print_warnings(err, file.model);
    const LfifCoefficients coeffs = coefficients(file.model, {flags.allow_unstable});
    const std::size_t n = file.model.n_internal();

    std::ofstream file_out;
    if (out_path) {
      file_out.open(*out_path, std::ios::binary);
      if (!file_out) throw Error(ErrorCode::InvalidInput, "cannot write " + out_path->string());
    }
    std::ostream& csv = out_path ? file_out : out;
    csv << "l0,l1,A,B,C\n";
    for (std::size_t l0 = 0; l0 < n; ++l0) {
      for (std::size_t l1 = 0; l1 < n; ++l1) {
        const std::size_t point[] = {l0, l1};
        csv << l0 + kStateLabelOffset << ',' << l1 + kStateLabelOffset << ','
            << format_csv(coeffs.a(point)) << ',' << format_csv(coeffs.b(point)) << ','
            << format_csv(test_function(coeffs, point)) << '\n';
      }
    }
    if (out_path) {
      file_out.close();
      if (!file_out) throw Error(ErrorCode::InvalidInput, "failed writing " + out_path->string());
      out << "wrote " << n * n << " rows to " << out_path->string() << '\n';
    }
    return kExitOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal boundary control for absorbing semi-Markov and Markov models"};
  app.require_subcommand(1);

  CommonFlags common;
  std::string model_path;
  std::string policy_path;

  auto* validate = app.add_subcommand("validate", "Check a model file and print derived quantities");
  validate->add_option("model", model_path, "Model JSON file")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Stationary index of a policy");
  evaluate->add_option("model", model_path, "Model JSON file")->required();
  evaluate->add_option("policy", policy_path, "Policy JSON file")->required();
  evaluate->add_flag("--allow-unstable", common.allow_unstable);

  std::string sense_name = "max";
  auto* opt = app.add_subcommand("optimize", "Optimal deterministic control");
  opt->add_option("model", model_path, "Model JSON file")->required();
  opt->add_option("--sense", sense_name, "max or min")
      ->check(CLI::IsMember({"max", "min"}))
      ->capture_default_str();
  opt->add_flag("--allow-unstable", common.allow_unstable);

  SimulateFlags sim;
  std::string law_name = "det";
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a policy's index");
  simulate->add_option("model", model_path, "Model JSON file")->required();
  simulate->add_option("policy", policy_path, "Policy JSON file")->required();
  simulate->add_option("--cycles", sim.cycles, "Control cycles to simulate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate->add_option("--law", law_name, "Sojourn law: det or exp")
      ->check(CLI::IsMember({"det", "exp"}))
      ->capture_default_str();
  simulate->add_flag("--allow-unstable", common.allow_unstable);

  std::string surface_out;
  auto* surface = app.add_subcommand("surface", "Export the test-function grid as CSV");
  surface->add_option("model", model_path, "Model JSON file")->required();
  surface->add_option("--out", surface_out, "CSV output path (default: stdout)");
  surface->add_flag("--allow-unstable", common.allow_unstable);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  if (*validate) return cmd_validate(model_path, out, err);
  if (*evaluate) return cmd_evaluate(model_path, policy_path, common, out, err);
  if (*opt) {
    return cmd_optimize(model_path, sense_name == "max" ? Sense::Maximize : Sense::Minimize,
                        common, out, err);
  }
  if (*simulate) {
    sim.law = law_name == "exp" ? HoldingTimeLaw::ExponentialMean
                                : HoldingTimeLaw::DeterministicMean;
    return cmd_simulate(model_path, policy_path, sim, common, out, err);
  }
  if (*surface) {
    std::optional<std::filesystem::path> path;
    if (!surface_out.empty()) path = surface_out;
    return cmd_surface(model_path, path, common, out, err);
  }
  return kExitError;
}

}  // namespace tuning::cli
