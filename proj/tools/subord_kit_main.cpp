// subord-kit: command-line front end for the subordinator toolkit.
//
// Exit codes (stable contract):
//   0 success / statistical pass
//   2 config error (parse failure, invalid spec, bad flags)
//   3 numerical failure (non-convergence, unstable inversion, budget blown)
//   4 statistical verification failure

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "subord/config.hpp"
#include "subord/errors.hpp"
#include "subord/gen_gamma.hpp"
#include "subord/harmonic.hpp"
#include "subord/montecarlo.hpp"
#include "subord/subordinator.hpp"

namespace {

using namespace subord;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw ConfigError("cannot parse number '" + item + "'");
      out.push_back(v);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw ConfigError("empty number list '" + text + "'");
  return out;
}

// "lo:hi:n" -> n log-spaced points; otherwise a comma list of abscissae.
std::vector<double> parse_grid(const std::string& text) {
  if (text.find(':') == std::string::npos) return parse_double_list(text);
  const std::size_t c1 = text.find(':');
  const std::size_t c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw ConfigError("grid must be 'lo:hi:n' or a comma list");
  const double lo = std::stod(text.substr(0, c1));
  const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  const int n = std::stoi(text.substr(c2 + 1));
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw ConfigError("grid needs 0 < lo < hi and n >= 2, got '" + text + "'");
  std::vector<double> out(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[i] = lo * std::exp(step * i);
  return out;
}

int cmd_describe(const SubordinatorSpec& spec) {
  std::cout << "# schema: subord-kit.describe.v1\n";
  std::cout << spec_to_config(spec);
  std::cout << "# phi on a default grid:\n";
  for (double lam : {0.01, 0.1, 0.5, 1.0, 2.0, 4.0, 10.0, 100.0})
    std::cout << "# phi(" << num17(lam) << ") = " << num17(spec.phi(lam)) << "\n";
  const SpecDiagnostics d = diagnose(spec);
  std::cout << "# log_concave = " << (d.log_concave ? "true" : "false")
            << " (worst second difference = " << num17(d.worst_log_concavity) << ")\n";
  std::cout << "# ratio_probe = " << num17(d.ratio_at_probe)
            << " (ok = " << (d.ratio_ok ? "true" : "false") << ")\n";
  return 0;
}

int cmd_moments(const SubordinatorSpec& spec, int n_int, const std::string& s_list) {
  std::cout << "# schema: subord-kit.moments.v1\n";
  std::cout << "s,moment_I,moment_R,product_I,product_R,duality_residual\n";
  const GenGamma g_phi(phi_family(spec));
  const GenGamma g_star(phi_star_family(spec));
  auto emit = [&](double s) {
    const double duality =
        std::exp(g_phi.log_gamma(s + 1.0) + g_star.log_gamma(s + 1.0) - std::lgamma(s + 1.0)) -
        1.0;
    std::cout << num17(s) << ',' << num17(moment_I(spec, s)) << ',' << num17(moment_R(spec, s))
              << ',';
    const double rounded = std::nearbyint(s);
    if (rounded >= 1.0 && std::abs(s - rounded) < 1e-12) {
      const int n = static_cast<int>(rounded);
      std::cout << num17(moment_I_integer(spec, n)) << ',' << num17(moment_R_integer(spec, n));
    } else {
      std::cout << ',';
    }
    std::cout << ',' << num17(duality) << '\n';
  };
  for (int n = 1; n <= n_int; ++n) emit(static_cast<double>(n));
  if (!s_list.empty())
    for (double s : parse_double_list(s_list)) emit(s);
  return 0;
}

int cmd_gamma(const SubordinatorSpec& spec, const std::string& s_list) {
  std::cout << "# schema: subord-kit.gamma.v1\n";
  std::cout << "s,gamma_phi_s,euler_gamma_phi,funceq_residual\n";
  const GenGamma g(phi_family(spec));
  const double euler = g.euler_constant();
  for (double s : parse_double_list(s_list.empty() ? "1,2,3,4,5" : s_list)) {
    const double lg_s = g.log_gamma(s);
    const double lg_s1 = g.log_gamma(s + 1.0);
    const double residual = std::abs(1.0 - spec.phi(s) * std::exp(lg_s - lg_s1));
    std::cout << num17(s) << ',' << num17(std::exp(lg_s)) << ',' << num17(euler) << ','
              << num17(residual) << '\n';
  }
  return 0;
}

int cmd_hpm(const SubordinatorSpec& spec, const std::string& grid_text) {
  const HarmonicDensity h = HarmonicDensity::build(spec);
  double delta = 0.0;
  for (double lam : {1.0, 2.0, 5.0}) delta = std::max(delta, h.laplace_residual(lam));
  std::cout << "# schema: subord-kit.hpm.v1\n";
  if (!h.notes().empty()) std::cout << "# notes: " << h.notes() << "\n";
  std::cout << "x,rho,provenance,inversion_delta\n";
  const std::string provenance = hpm_rule_name(h.rule());
  if (h.is_atomic()) {
    for (const auto& atom : h.atoms())
      std::cout << num17(atom.location) << ',' << num17(atom.mass) << ",atomic,"
                << num17(delta) << '\n';
    return 0;
  }
  for (double x : parse_grid(grid_text)) {
    std::cout << num17(x) << ',' << num17(h(x)) << ',' << provenance << ',' << num17(delta)
              << '\n';
  }
  return 0;
}

int cmd_idtest(const SubordinatorSpec& spec, bool rho_grid) {
  const IdVerdict v = id_test_logI(spec);
  const std::string prefix = rho_grid ? "# " : "";
  if (rho_grid) std::cout << "# schema: subord-kit.idtest.v1\n";
  std::cout << prefix << "verdict = " << id_outcome_name(v.outcome) << "\n";
  std::cout << prefix << "sup_rho = " << num17(v.sup_rho) << "\n";
  if (v.witness_x) {
    std::cout << prefix << "witness_x = " << num17(*v.witness_x) << "\n";
    std::cout << prefix << "witness_rho = " << num17(*v.witness_rho) << "\n";
  }
  if (!v.notes.empty()) std::cout << prefix << "notes = " << v.notes << "\n";
  if (!rho_grid) return 0;
  const HarmonicDensity h = HarmonicDensity::build(spec);
  std::cout << "x,rho\n";
  if (h.is_atomic()) {
    for (const auto& atom : h.atoms())
      std::cout << num17(atom.location) << ',' << num17(atom.mass) << '\n';
    return 0;
  }
  IdSearchConfig search;
  double hi = search.x_hi;
  if (h.support_end()) hi = std::min(hi, *h.support_end() * 0.999);
  const int n = search.grid_points;
  const double step = std::log(hi / search.x_lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = search.x_lo * std::exp(step * i);
    std::cout << num17(x) << ',' << num17(h(x)) << '\n';
  }
  return 0;
}

int cmd_verify(const SubordinatorSpec& spec, const std::string& suite, double alpha, int n,
               const SimConfig& cfg) {
  SimReport report;
  if (suite == "moments") {
    report = verify_moments(spec, n > 0 ? n : 4, cfg);
  } else if (suite == "undershoot") {
    report = verify_undershoot(spec, alpha, {0.5, 1.0, 2.0}, cfg);
  } else if (suite == "factorization") {
    report = verify_factorization(spec, cfg);
  } else if (suite == "joint") {
    report = verify_joint(spec, alpha, cfg);
  } else if (suite == "gordon") {
    report = verify_gordon(spec, n > 0 ? n : 200, cfg);
  } else {
    throw ConfigError("unknown suite '" + suite + "'");
  }
  std::cout << report_to_csv(report);
  if (!report.all_pass()) {
    std::cerr << "verify: statistical check failed in suite '" << suite << "'\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subord-kit: killed-subordinator toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string s_list;
  std::string grid_text = "0.1:10:41";
  std::string suite = "moments";
  bool rho_grid = false;
  int n_flag = 0;
  int n_moments = 3;
  double alpha = 1.0;
  long long seed_flag = -1;
  long long samples_flag = -1;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "spec config file")->required();
  };

  CLI::App* describe = app.add_subcommand("describe", "print the triplet, phi grid, diagnostics");
  add_config(describe);

  CLI::App* moments = app.add_subcommand("moments", "moment transforms of I and R");
  add_config(moments);
  moments->add_option("--n", n_moments, "integer moment rows 1..n (default 3)");
  moments->add_option("--s", s_list, "comma list of extra (real) orders");

  CLI::App* idtest = app.add_subcommand("idtest", "infinite-divisibility test of log I");
  add_config(idtest);
  idtest->add_flag("--rho-grid", rho_grid, "also print the searched rho grid as CSV");

  CLI::App* hpm = app.add_subcommand("hpm", "harmonic potential density rho");
  add_config(hpm);
  hpm->add_option("--grid", grid_text, "'lo:hi:n' log grid or comma list (default 0.1:10:41)");

  CLI::App* gamma = app.add_subcommand("gamma", "generalized gamma function of phi");
  add_config(gamma);
  gamma->add_option("--s", s_list, "comma list of arguments (default 1..5)");

  CLI::App* verify = app.add_subcommand("verify", "Monte Carlo verification suites");
  add_config(verify);
  verify->add_option("--suite", suite, "one of undershoot|factorization|moments|joint|gordon")
      ->check(CLI::IsMember({"undershoot", "factorization", "moments", "joint", "gordon"}));
  verify->add_option("--alpha", alpha, "exponential level / horizon rate (default 1)");
  verify->add_option("--n", n_flag, "suite size parameter (moment order / truncation)");
  verify->add_option("--seed", seed_flag, "override sim.seed");
  verify->add_option("--samples", samples_flag, "override sim.n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const subord::ParsedConfig cfg = subord::parse_config_file(config_path);
    const subord::SubordinatorSpec spec = subord::build_spec(cfg);
    if (describe->parsed()) return cmd_describe(spec);
    if (moments->parsed()) return cmd_moments(spec, n_moments, s_list);
    if (idtest->parsed()) return cmd_idtest(spec, rho_grid);
    if (hpm->parsed()) return cmd_hpm(spec, grid_text);
    if (gamma->parsed()) return cmd_gamma(spec, s_list);
    if (verify->parsed()) {
      subord::SimConfig sim = subord::build_sim_config(cfg);
      if (seed_flag >= 0) sim.seed = static_cast<std::uint64_t>(seed_flag);
      if (samples_flag > 0) sim.n_samples = static_cast<std::size_t>(samples_flag);
      return cmd_verify(spec, suite, alpha, n_flag, sim);
    }
    std::cerr << "no subcommand dispatched\n";
    return 2;
  } catch (const subord::SpecError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
