// qbench: command-line front end for the classical-limit certification
// toolkit. Subcommands mirror the library: closed-form CV limit, ensemble
// limit, verdicts on measured data, channel simulation, proof audits and the
// Haar example.
//
// Exit codes: 0 QuantumDomain or successful computation, 1 Inconclusive,
// 2 input error, 3 numerical-budget failure.

#include "qbench/cv_benchmark.hpp"
#include "qbench/criterion.hpp"
#include "qbench/io.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

using nlohmann::json;

namespace {

struct CommonOptions {
  std::string output_format = "text";
  int radial = 32;
  int angular = 32;
  int dim = 0;  // 0 = choose from the task
  std::uint64_t seed = 1;
};

void emit(const json& j, const std::string& format) {
  if (format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (const auto& [key, value] : j.items()) {
    std::cout << key << ": ";
    if (value.is_string())
      std::cout << value.get<std::string>();
    else
      std::cout << value.dump();
    std::cout << "\n";
  }
}

json report_with_command(const qbench::CertificationReport& rep,
                         const std::string& command) {
  json j = qbench::report_to_json(rep);
  j["command"] = command;
  return j;
}

int exit_code_for(const qbench::CertificationReport& rep) {
  return rep.verdict == qbench::Verdict::Inconclusive ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum benchmark fidelity certification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // let --output/--dim/... appear after subcommand args

  CommonOptions opt;
  app.add_option("--output", opt.output_format, "output format: text|json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--radial", opt.radial, "radial quadrature nodes");
  app.add_option("--angular", opt.angular, "angular quadrature nodes");
  app.add_option("--dim", opt.dim, "Fock truncation override");
  app.add_option("--seed", opt.seed, "random seed");

  if (const char* env = std::getenv("QBENCH_THREADS")) {
    // Numerics are single-threaded; the cap is honored trivially but the
    // variable is validated so misconfiguration is caught early.
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || v < 1) {
      std::cerr << "error: QBENCH_THREADS must be a positive integer\n";
      return 2;
    }
  }

  double task_n = 1.0, task_eta = 1.0, task_lambda = 1.0;

  auto* limit_cv = app.add_subcommand("limit-cv", "closed-form classical limit");
  limit_cv->add_option("--N", task_n, "input amplitude scale")->required();
  limit_cv->add_option("--eta", task_eta, "target gain")->required();
  limit_cv->add_option("--lambda", task_lambda, "prior inverse width")->required();

  std::string file_path;
  double gram_tol = 1e-8;
  auto* limit_ens = app.add_subcommand("limit-ensemble",
                                       "classical limit of a finite ensemble");
  limit_ens->add_option("--file", file_path, "ensemble JSON file")->required();
  limit_ens->add_option("--tol", gram_tol, "Gram rank tolerance");

  std::optional<double> budget;
  bool optimize_priors = false;
  auto* verdict_cmd = app.add_subcommand("verdict",
                                         "quantum-domain verdict on measured data");
  verdict_cmd->add_option("--file", file_path, "ensemble JSON file")->required();
  verdict_cmd->add_option("--budget", budget, "error budget override");
  verdict_cmd->add_option("--tol", gram_tol, "Gram rank tolerance");
  verdict_cmd->add_flag("--optimize-priors", optimize_priors,
                        "coordinate-ascent prior search before the verdict");

  std::string channel_kind = "loss";
  double channel_eta = 1.0, channel_gain = 0.0;
  bool gain_given = false;
  auto* simulate = app.add_subcommand("simulate",
                                      "simulate a channel and test it against the CV limit");
  simulate->add_option("--channel", channel_kind, "loss|heterodyne|identity")
      ->check(CLI::IsMember({"loss", "heterodyne", "identity"}));
  simulate->add_option("--channel-eta", channel_eta, "loss transmissivity");
  simulate->add_option("--gain", channel_gain, "heterodyne MP prepare gain")
      ->each([&](const std::string&) { gain_given = true; });
  simulate->add_option("--N", task_n, "input amplitude scale");
  simulate->add_option("--eta", task_eta, "target gain");
  simulate->add_option("--lambda", task_lambda, "prior inverse width");

  std::string xi_arg = "tight";
  auto* audit = app.add_subcommand("proof-audit",
                                   "numerical audit of the bound derivation");
  audit->add_option("--N", task_n, "input amplitude scale");
  audit->add_option("--lambda", task_lambda, "prior inverse width");
  audit->add_option("--xi", xi_arg, "squeezing parameter, number or 'tight'");

  int haar_d = 2;
  long haar_samples = 0;
  auto* haar = app.add_subcommand("haar-limit", "Haar-uniform classical limit");
  haar->add_option("--d", haar_d, "Hilbert space dimension")->required();
  haar->add_option("--samples", haar_samples,
                   "also run a Monte Carlo twirl cross-check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*limit_cv) {
      const qbench::GaussianTask task{task_n, task_eta, task_lambda};
      json j;
      j["command"] = "limit-cv";
      j["N"] = task_n;
      j["eta"] = task_eta;
      j["lambda"] = task_lambda;
      j["classical_limit"] = qbench::classical_limit_cv(task);
      emit(j, opt.output_format);
      return 0;
    }

    if (*limit_ens) {
      const qbench::Ensemble ens = qbench::parse_ensemble_file(file_path);
      const qbench::EnsembleLimit lim = qbench::classical_limit_ensemble(ens, gram_tol);
      json j;
      j["command"] = "limit-ensemble";
      j["classical_limit"] = lim.limit;
      j["operator_norm"] = lim.operator_norm;
      j["d_effective"] = lim.d_effective;
      j["d_target"] = lim.d_target;
      j["vacuous"] = lim.vacuous;
      j["gram_singular_values"] = lim.input_singular_values;
      j["eigenvalue_residual"] = lim.eigenvalue_residual;
      emit(j, opt.output_format);
      return 0;
    }

    if (*verdict_cmd) {
      qbench::Ensemble ens = qbench::parse_ensemble_file(file_path);
      json j;
      if (optimize_priors) {
        const std::vector<double> priors = qbench::prior_search(ens);
        for (size_t i = 0; i < priors.size(); ++i)
          ens.entries[i].prior = priors[i];
        j["optimized_priors"] = priors;
      }
      const qbench::CertificationReport rep =
          qbench::certification_verdict(ens, budget, gram_tol);
      j.update(report_with_command(rep, "verdict"));
      emit(j, opt.output_format);
      return exit_code_for(rep);
    }

    if (*simulate) {
      const qbench::GaussianTask task{task_n, task_eta, task_lambda};
      qbench::QuadratureSpec spec{opt.radial, opt.angular, task_lambda};
      const double extra =
          (channel_kind == "heterodyne" && gain_given) ? channel_gain : 1.0;
      qbench::Truncation trunc =
          opt.dim > 0 ? qbench::Truncation{opt.dim}
                      : qbench::truncation_for_task(task, spec, extra);
      qbench::Channel ch;
      if (channel_kind == "loss")
        ch = qbench::loss_channel(channel_eta, trunc);
      else if (channel_kind == "identity")
        ch = qbench::identity_channel(trunc.dim);
      else {
        const double g = gain_given ? channel_gain : qbench::attaining_gain(
                                                         qbench::to_unit_gain(task));
        ch = qbench::heterodyne_mp_channel(g, trunc);
      }
      const double fidelity = qbench::average_fidelity_cv(ch, task, spec, trunc);
      const double limit = qbench::classical_limit_cv(task);

      qbench::CertificationReport rep;
      rep.classical_limit = limit;
      rep.average_fidelity = fidelity;
      rep.margin = fidelity - limit;
      rep.diagnostics.truncation_deficits = ch.completeness_deficit;
      rep.diagnostics.quadrature_spec = spec;
      const double err_budget = budget.value_or(2e-3);
      rep.verdict = (*rep.margin > err_budget) ? qbench::Verdict::QuantumDomain
                                               : qbench::Verdict::Inconclusive;
      json j = report_with_command(rep, "simulate");
      j["channel"] = channel_kind;
      j["fock_dim"] = trunc.dim;
      emit(j, opt.output_format);
      return exit_code_for(rep);
    }

    if (*audit) {
      const qbench::GaussianTask task{task_n, 1.0, task_lambda};
      const double xi = (xi_arg == "tight") ? qbench::tight_xi(task)
                                            : std::stod(xi_arg);
      qbench::QuadratureSpec spec{opt.radial, opt.angular, task_lambda};
      qbench::Truncation trunc =
          opt.dim > 0 ? qbench::Truncation{opt.dim}
                      : qbench::truncation_for_task(task, spec, std::sqrt(task_n) / xi);
      const qbench::AuditRecord rec = qbench::proof_audit(task, xi, spec, trunc);
      json j;
      j["command"] = "proof-audit";
      j["s"] = rec.params.s;
      j["kappa"] = rec.params.kappa;
      j["xi"] = rec.params.xi;
      j["j_value"] = rec.j_value;
      j["j_expected"] = rec.j_expected;
      j["j_residual"] = rec.j_residual;
      j["gamma_eigenvalue"] = rec.gamma_eigenvalue;
      j["gamma_expected"] = rec.gamma_expected;
      j["eigen_residual"] = rec.eigen_residual;
      j["intermediate_bound"] = rec.intermediate_bound;
      j["classical_limit"] = rec.classical_limit;
      j["lambda_over_one_minus_xi2"] = rec.lambda_over_one_minus_xi2;
      j["n_plus_lambda"] = rec.n_plus_lambda;
      j["attaining_fidelity"] = rec.attaining_fidelity;
      j["attaining_gap"] = rec.attaining_gap;
      j["fock_dim"] = trunc.dim;
      emit(j, opt.output_format);
      return 0;
    }

    if (*haar) {
      json j;
      j["command"] = "haar-limit";
      j["d"] = haar_d;
      j["classical_limit"] = qbench::haar_classical_limit(haar_d);
      if (haar_samples > 0)
        j["monte_carlo_residual"] =
            qbench::haar_sampling_check(haar_d, haar_samples, opt.seed);
      emit(j, opt.output_format);
      return 0;
    }
  } catch (const qbench::TruncationError& e) {
    std::cerr << "numerical budget failure: " << e.what() << "\n";
    return 3;
  } catch (const qbench::QuadratureError& e) {
    std::cerr << "numerical budget failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
