// Command-line front end: certification, lifting, rank diagnostics,
// multistart solving, collinear solutions, and counting bounds.
//
// Exit codes: 0 success/certified, 1 domain failure, 2 input error,
// 3 internal inconsistency.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "cencon/cencon.hpp"

namespace {

using namespace cencon;

double default_tolerance() {
  if (const char* env = std::getenv("CENCON_TOL")) {
    try {
      const double v = std::stod(env);
      if (v > 0) return v;
    } catch (...) {
    }
    throw InputError("CENCON_TOL must be a positive number");
  }
  return 1e-8;
}

int resolve_two_a(const ConfigFile& file, std::optional<int> flag) {
  if (flag) return *flag;
  if (file.two_a) return *file.two_a;
  throw InputError("no exponent: provide --two-a or a two_a field in the file");
}

std::string complex_str(const Complex& z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

json complex_json(const Complex& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

void write_jacobian_csv(const std::string& path, const MatrixXcd& jac) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  for (int i = 0; i < jac.rows(); ++i) {
    for (int j = 0; j < jac.cols(); ++j) {
      if (j) out << ",";
      out << complex_str(jac(i, j));
    }
    out << "\n";
  }
}

void emit(const json& j, const std::string& out_path) {
  std::cout << j.dump(2) << std::endl;
  if (!out_path.empty()) save_json_file(out_path, j);
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& path, std::optional<int> two_a_flag, double tol,
               const std::string& out_path) {
  const ConfigFile file = config_file_from_json(load_json_file(path));
  const Exponent a{resolve_two_a(file, two_a_flag)};
  const CertificationReport rep = certify(file.config, file.masses, a, tol);
  emit(certification_to_json(rep), out_path);
  return rep.central ? 0 : 1;
}

int cmd_lift(const std::string& path, std::optional<int> two_a_flag, double tol,
             const std::string& out_path, const std::string& jac_path, W2Policy policy) {
  const ConfigFile file = config_file_from_json(load_json_file(path));
  const Exponent a{resolve_two_a(file, two_a_flag)};
  const auto [p, mirror] = lift_point(file.config, file.masses, a, tol);

  json diag;
  diag["system_residual"] = system_residual(p).max_norm();
  diag["psi_max"] = psi_values(p).cwiseAbs().maxCoeff();
  const WFlags w = w_membership(p, policy);
  diag["w1"] = w.w1;
  diag["w2"] = w.w2;
  diag["w3"] = w.w3;
  const JacobianRank jr = jacobian_rank(p);
  diag["jacobian_rank"] = jr.rank;
  diag["local_dim_bound"] = jr.local_dim_upper_bound;
  const HDeterminant h = h_submatrix_det(p);
  diag["detH"] = complex_json(h.det);
  diag["detH_closed_form"] = complex_json(h.closed_form);
  diag["grad_f_identity"] = grad_f_identity_check(p);
  diag["normalized"] = p.normalized;

  json out;
  out["lifted_point"] = lifted_point_to_json(p);
  out["mirror_point"] = lifted_point_to_json(mirror);
  out["diagnostics"] = diag;
  std::cout << out.dump(2) << std::endl;
  if (!out_path.empty()) save_json_file(out_path, lifted_point_to_json(p));
  if (!jac_path.empty()) write_jacobian_csv(jac_path, jacobian(p));
  return 0;
}

int cmd_solve(int n, const std::vector<double>& masses, int two_a, int seeds,
              std::uint64_t rng_seed, const std::string& out_path) {
  const MassVector m = masses.empty() ? MassVector::equal(n) : MassVector(masses);
  const XmSystem sys = build_xm_system(n, m, Exponent{two_a});
  const SolveReport rep = search(sys, seeds, rng_seed);
  const json j = solve_report_to_json(rep);
  if (!out_path.empty())
    save_json_file(out_path, j);
  else
    std::cout << j.dump(2) << std::endl;
  // summary goes to stderr so stdout stays a single JSON document
  std::cerr << "solutions: " << rep.solutions.size() << "\n";
  if (n >= 4) {
    const BoundResult bound = thom_milnor_cc_bound(n, Exponent{two_a});
    std::cerr << "bound: " << bound.value.to_string() << "\n";
  }
  return 0;
}

int cmd_bound(int n, int two_a) {
  if (n < 4) {
    std::cerr << "bound: the counting bound is only stated for n >= 4\n";
    return 1;
  }
  std::cout << thom_milnor_cc_bound(n, Exponent{two_a}).value.to_string() << std::endl;
  return 0;
}

int cmd_dimension(const std::string& path) {
  const json j = load_json_file(path);
  int dim_points = -1;
  int dim_distances = -1;
  DistanceVector r;
  if (j.contains("points")) {
    const ConfigFile file = config_file_from_json(j);
    dim_points = config_dimension(file.config);
    r = mutual_distances(file.config);
    dim_distances = dimension_from_distances(r);
  } else if (j.contains("r")) {
    r = distance_vector_from_json(j);
    dim_distances = dimension_from_distances(r);
    dim_points = config_dimension(recover_configuration(r, dim_distances));
  } else {
    throw InputError("dimension: file is neither a configuration nor a distance vector");
  }
  if (dim_points != dim_distances)
    throw InternalError("dimension: point-space and distance-space dimensions disagree (" +
                        std::to_string(dim_points) + " vs " + std::to_string(dim_distances) + ")");
  const auto member = determinantal_membership(r, dim_points);
  json out;
  out["dimension"] = dim_points;
  out["dimension_from_points"] = dim_points;
  out["dimension_from_distances"] = dim_distances;
  out["in_N_k3"] = member.in_rank_set_k3;
  out["in_N_k2"] = member.in_rank_set_k2;
  std::cout << out.dump(2) << std::endl;
  return 0;
}

int cmd_moulton(const std::vector<double>& masses, int two_a, std::vector<int> ordering,
                const std::string& out_path) {
  const MassVector m(masses);
  const int n = m.n();
  if (ordering.empty()) {
    ordering.resize(n);
    for (int i = 0; i < n; ++i) ordering[i] = i;
  }
  const Exponent a{two_a};
  const Configuration x = moulton_collinear(m, a, ordering);
  const double lambda = fit_lambda(x, m, a);
  json out;
  out["ordering"] = ordering;
  json positions = json::array();
  for (const auto& p : x.points) positions.push_back(p(0));
  out["positions"] = positions;
  out["r"] = x.mutual_distances();
  out["lambda"] = lambda;
  out["residual"] = cc_residual(x, m, a, lambda);
  out["config"] = config_file_to_json(ConfigFile{x, m, true, two_a});
  emit(out, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"central configuration toolkit: certification, Cayley-Menger rank analysis, "
               "variety lifting, Dziobek search, and counting bounds"};
  app.require_subcommand(1);

  std::string in_path, out_path, jac_path, policy_str = "all";
  std::optional<int> two_a_flag;
  int two_a = -3;
  int n = 4;
  int seeds = 500;
  std::uint64_t rng_seed = 1;
  std::vector<double> masses;
  std::vector<int> ordering;
  double tol = 0.0;  // resolved after parsing: flag > env > default

  auto add_tol = [&](CLI::App* cmd) {
    cmd->add_option("--tol", tol, "certification tolerance (default 1e-8, env CENCON_TOL)");
  };

  auto* verify = app.add_subcommand("verify", "certify a configuration file");
  verify->add_option("config", in_path, "configuration JSON file")->required();
  verify->add_option("--two-a", two_a_flag, "exponent as the integer 2a");
  verify->add_option("--out", out_path, "also write the report to this file");
  add_tol(verify);

  auto* lift = app.add_subcommand("lift", "lift a Dziobek configuration to the variety");
  lift->add_option("config", in_path, "configuration JSON file")->required();
  lift->add_option("--two-a", two_a_flag, "exponent as the integer 2a");
  lift->add_option("--out", out_path, "write the lifted point JSON here");
  lift->add_option("--jacobian-out", jac_path, "write the Jacobian as CSV here");
  lift->add_option("--policy-w2", policy_str, "cofactor-locus policy: all|any")
      ->check(CLI::IsMember({"all", "any"}));
  add_tol(lift);

  auto* solve = app.add_subcommand("solve", "multistart search for Dziobek configurations");
  solve->add_option("--n", n, "body count")->required();
  solve->add_option("--masses", masses, "comma-separated masses (default: equal)")->delimiter(',');
  solve->add_option("--two-a", two_a, "exponent as the integer 2a")->required();
  solve->add_option("--seeds", seeds, "number of Newton seeds");
  solve->add_option("--rng-seed", rng_seed, "64-bit seed of the counter-based generator");
  solve->add_option("--out", out_path, "write the report to this file");

  auto* bound = app.add_subcommand("bound", "print the exact counting bound");
  bound->add_option("--n", n, "body count")->required();
  bound->add_option("--two-a", two_a, "exponent as the integer 2a")->required();

  auto* dimension = app.add_subcommand("dimension", "dimension via both rank routes");
  dimension->add_option("file", in_path, "configuration or distance JSON file")->required();

  auto* moulton = app.add_subcommand("moulton", "collinear central configuration for an ordering");
  moulton->add_option("--masses", masses, "comma-separated masses")->required()->delimiter(',');
  moulton->add_option("--two-a", two_a, "exponent as the integer 2a")->required();
  moulton->add_option("--ordering", ordering, "0-based body indices, left to right")
      ->delimiter(',');
  moulton->add_option("--out", out_path, "also write the result to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (tol <= 0.0) tol = default_tolerance();
    if (verify->parsed()) return cmd_verify(in_path, two_a_flag, tol, out_path);
    if (lift->parsed())
      return cmd_lift(in_path, two_a_flag, tol, out_path, jac_path,
                      policy_str == "any" ? W2Policy::any_cofactor : W2Policy::all_cofactors);
    if (solve->parsed()) return cmd_solve(n, masses, two_a, seeds, rng_seed, out_path);
    if (bound->parsed()) return cmd_bound(n, two_a);
    if (dimension->parsed()) return cmd_dimension(in_path);
    if (moulton->parsed()) return cmd_moulton(masses, two_a, ordering, out_path);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InternalError& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
