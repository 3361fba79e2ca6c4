#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "cencon/cayley_menger.hpp"
#include "cencon/central_config.hpp"
#include "cencon/errors.hpp"
#include "cencon/geometry.hpp"
#include "cencon/solver.hpp"
#include "cencon/variety.hpp"

namespace cencon {

using nlohmann::json;

// ---------------------------------------------------------------------------
// configuration files: {"n", "d", "points", "masses" optional, "two_a"}

struct ConfigFile {
  Configuration config;
  MassVector masses;        // defaults to unit masses when absent
  bool masses_given = false;
  std::optional<int> two_a;
};

inline json configuration_to_json(const Configuration& x) {
  json j;
  j["n"] = x.n;
  j["d"] = x.d;
  json pts = json::array();
  for (const auto& p : x.points) {
    json row = json::array();
    for (int i = 0; i < p.size(); ++i) row.push_back(p(i));
    pts.push_back(row);
  }
  j["points"] = pts;
  return j;
}

inline ConfigFile config_file_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int d = j.at("d").get<int>();
    std::vector<VectorXd> pts;
    for (const auto& row : j.at("points")) {
      VectorXd p(d);
      if (static_cast<int>(row.size()) != d)
        throw InputError("configuration: point with wrong dimension");
      for (int i = 0; i < d; ++i) p(i) = row.at(i).get<double>();
      pts.push_back(p);
    }
    ConfigFile out;
    out.config = Configuration(n, d, std::move(pts));
    if (j.contains("masses")) {
      out.masses = MassVector(j.at("masses").get<std::vector<double>>());
      out.masses_given = true;
      if (out.masses.n() != n) throw InputError("configuration: wrong mass count");
    } else {
      out.masses = MassVector::equal(n);
    }
    if (j.contains("two_a")) out.two_a = j.at("two_a").get<int>();
    return out;
  } catch (const json::exception& e) {
    throw InputError(std::string("configuration: malformed JSON (") + e.what() + ")");
  }
}

inline json config_file_to_json(const ConfigFile& f) {
  json j = configuration_to_json(f.config);
  if (f.masses_given) j["masses"] = f.masses.m;
  if (f.two_a) j["two_a"] = *f.two_a;
  return j;
}

// ---------------------------------------------------------------------------
// distance files: {"n", "r"}

inline json distance_vector_to_json(const DistanceVector& r) {
  return json{{"n", r.n}, {"r", r.r}};
}

inline DistanceVector distance_vector_from_json(const json& j) {
  try {
    return DistanceVector(j.at("n").get<int>(), j.at("r").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw InputError(std::string("distance vector: malformed JSON (") + e.what() + ")");
  }
}

// ---------------------------------------------------------------------------
// lifted points

inline json lifted_point_to_json(const LiftedPoint& p) {
  json j;
  j["n"] = p.n;
  j["two_a"] = p.two_a;
  j["r"] = std::vector<double>(p.r.data(), p.r.data() + p.r.size());
  std::vector<double> zre(p.n), zim(p.n);
  for (int i = 0; i < p.n; ++i) {
    zre[i] = p.z(i).real();
    zim[i] = p.z(i).imag();
  }
  j["z_re"] = zre;
  j["z_im"] = zim;
  j["delta0_re"] = p.delta0.real();
  j["delta0_im"] = p.delta0.imag();
  j["m"] = std::vector<double>(p.m.data(), p.m.data() + p.m.size());
  j["normalized"] = p.normalized;
  return j;
}

inline LiftedPoint lifted_point_from_json(const json& j) {
  try {
    LiftedPoint p;
    p.n = j.at("n").get<int>();
    p.two_a = j.at("two_a").get<int>();
    const auto r = j.at("r").get<std::vector<double>>();
    const auto zre = j.at("z_re").get<std::vector<double>>();
    const auto zim = j.at("z_im").get<std::vector<double>>();
    const auto m = j.at("m").get<std::vector<double>>();
    p.r = Eigen::Map<const VectorXd>(r.data(), static_cast<int>(r.size()));
    if (static_cast<int>(zre.size()) != p.n || static_cast<int>(zim.size()) != p.n)
      throw InputError("lifted point: wrong z length");
    p.z = VectorXcd(p.n);
    for (int i = 0; i < p.n; ++i) p.z(i) = Complex(zre[i], zim[i]);
    p.delta0 = Complex(j.at("delta0_re").get<double>(), j.at("delta0_im").get<double>());
    p.m = Eigen::Map<const VectorXd>(m.data(), static_cast<int>(m.size()));
    p.normalized = j.value("normalized", false);
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw InputError(std::string("lifted point: malformed JSON (") + e.what() + ")");
  }
}

// ---------------------------------------------------------------------------
// certification reports

inline json dziobek_to_json(const DziobekData& d) {
  json j;
  j["delta"] = std::vector<double>(d.delta.data(), d.delta.data() + d.delta.size());
  j["w"] = std::vector<double>(d.w.data(), d.w.data() + d.w.size());
  j["kappa"] = d.kappa;
  j["lambda"] = d.lambda;
  j["r0_pow"] = d.r0_pow;
  if (d.r0) j["r0"] = *d.r0;
  j["simplex"] = d.simplex;
  return j;
}

inline json certification_to_json(const CertificationReport& rep) {
  json j;
  j["central"] = rep.central;
  j["lambda"] = rep.lambda;
  j["residual"] = rep.residual;
  j["dimension"] = rep.dimension;
  if (rep.dziobek && !rep.dziobek->simplex) j["dziobek"] = dziobek_to_json(*rep.dziobek);
  if (rep.alpha) j["alpha"] = *rep.alpha;
  return j;
}

// ---------------------------------------------------------------------------
// solve reports

inline json solve_report_to_json(const SolveReport& rep) {
  json j;
  j["rng"] = rep.rng_name;
  j["rng_seed"] = rep.rng_seed;
  j["seeds_tried"] = rep.seeds_tried;
  j["dedup_tolerance"] = rep.dedup_tolerance;
  json sols = json::array();
  for (const auto& s : rep.solutions) {
    json e;
    e["r"] = std::vector<double>(s.r.data(), s.r.data() + s.r.size());
    e["kappa"] = s.kappa;
    e["w"] = std::vector<double>(s.w.data(), s.w.data() + s.w.size());
    e["residual"] = s.residual;
    e["cm_rank"] = s.cm_rank_value;
    e["jacobian_rank_at_lift"] = s.jacobian_rank_at_lift;
    e["classification"] = s.classification;
    e["points"] = configuration_to_json(s.points)["points"];
    e["certification"] = certification_to_json(s.cert);
    sols.push_back(e);
  }
  j["solutions"] = sols;
  return j;
}

// ---------------------------------------------------------------------------
// helpers

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("cannot parse JSON file ") + path + ": " + e.what());
  }
}

inline void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace cencon
