#include "hallwalk/json_io.hpp"

#include <initializer_list>
#include <ostream>
#include <utility>

#include "hallwalk/errors.hpp"

namespace hallwalk::io {

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const char* what) {
  if (!j.is_object())
    throw ConfigError(std::string(what) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (key == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(std::string(what) + ": unknown field \"" + key + "\"");
  }
}

}  // namespace

json coweight_json(const Coweight& c) {
  json a = json::array();
  for (auto v : c) a.push_back(v);
  return a;
}

Coweight parse_coweight(const json& j, std::size_t rank) {
  if (!j.is_array()) throw ConfigError("coweight: expected a JSON integer array");
  Coweight c;
  for (const auto& v : j) {
    if (!v.is_number_integer())
      throw ConfigError("coweight: entries must be integers, got " + v.dump());
    c.push_back(v.get<std::int64_t>());
  }
  if (rank != 0 && c.size() != rank)
    throw ConfigError("coweight " + cw_str(c) + " has rank " +
                      std::to_string(c.size()) + ", expected " + std::to_string(rank));
  return c;
}

CartanMatrix parse_cartan(const json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigError("cartan: expected a nonempty JSON array of rows");
  CartanMatrix m;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != j.size())
      throw ConfigError("cartan: matrix must be square");
    std::vector<std::int64_t> r;
    for (const auto& v : row) {
      if (!v.is_number_integer())
        throw ConfigError("cartan: entries must be integers, got " + v.dump());
      r.push_back(v.get<std::int64_t>());
    }
    m.push_back(std::move(r));
  }
  return m;
}

json tpoly_json(const TPoly& f) {
  json a = json::array();
  if (f.is_zero()) {
    a.push_back("0");
    return a;
  }
  for (const auto& c : f.coeffs()) a.push_back(c.get_str());
  return a;
}

json roots_json(const RootSystem& rs) {
  json j;
  j["rank"] = rs.rank();
  j["cartan"] = json::array();
  for (const auto& row : rs.cartan()) {
    json r = json::array();
    for (auto v : row) r.push_back(v);
    j["cartan"].push_back(r);
  }
  j["num_positive_roots"] = rs.num_positive_roots();
  json roots = json::array();
  for (const auto& d : rs.positive_roots()) {
    json e;
    json rc = json::array();
    for (auto v : d.root) rc.push_back(v);
    e["root"] = rc;
    e["coroot"] = coweight_json(d.coroot);
    roots.push_back(e);
  }
  j["positive_roots"] = roots;
  j["weyl_order"] = rs.weyl_order();
  j["poincare"] = tpoly_json(rs.poincare());
  j["two_rho_check"] = coweight_json(rs.two_rho_check());
  return j;
}

json hl_json(const HLExpansion& e) {
  json j;
  j["lambda"] = coweight_json(e.lambda);
  json terms = json::array();
  for (const auto& [nu, u] : e.terms.terms()) {
    json t;
    t["nu"] = coweight_json(nu);
    t["u"] = tpoly_json(u);
    terms.push_back(t);
  }
  j["terms"] = terms;
  return j;
}

json lr_json(const LRTable& t) {
  json j;
  j["mu"] = coweight_json(t.mu);
  j["nu"] = coweight_json(t.nu);
  json cs = json::array();
  for (const auto& [lambda, c] : t.coeffs) {
    json e;
    e["lambda"] = coweight_json(lambda);
    e["c"] = tpoly_json(c);
    cs.push_back(e);
  }
  j["coefficients"] = cs;
  return j;
}

json distribution_json(const LatticeDistribution& d) {
  json a = json::array();
  for (const auto& [cw, p] : d.support()) {
    json e;
    e["cw"] = coweight_json(cw);
    e["p"] = rat_str(p);
    a.push_back(e);
  }
  return a;
}

LatticeDistribution parse_distribution(const json& j, std::size_t rank) {
  if (!j.is_array() || j.empty())
    throw ConfigError("distribution: expected a nonempty array of {cw, p} atoms");
  LatticeDistribution::Map m;
  for (const auto& atom : j) {
    require_keys(atom, {"cw", "p"}, "distribution atom");
    if (!atom.contains("cw") || !atom.contains("p"))
      throw ConfigError("distribution atom needs both \"cw\" and \"p\"");
    Coweight cw = parse_coweight(atom.at("cw"), rank);
    QQ p;
    const json& pj = atom.at("p");
    if (pj.is_string()) {
      try {
        p = parse_rat(pj.get<std::string>());
      } catch (const std::exception& e) {
        throw ConfigError(std::string("distribution atom: ") + e.what());
      }
    } else if (pj.is_number_integer()) {
      p = QQ(pj.get<long>());
    } else {
      throw ConfigError(
          "distribution atom: \"p\" must be a rational string like \"2/3\"");
    }
    if (m.count(cw))
      throw ConfigError("distribution repeats atom " + cw_str(cw));
    m.emplace(std::move(cw), std::move(p));
  }
  try {
    return LatticeDistribution(std::move(m));
  } catch (const InvariantViolation& e) {
    throw ConfigError(std::string("distribution: ") + e.what());
  }
}

std::vector<LatticeDistribution> parse_step_laws(const json& j, std::size_t rank) {
  if (!j.is_array() || j.empty())
    throw ConfigError("step law: expected a JSON array");
  std::vector<LatticeDistribution> laws;
  if (j.front().is_array()) {
    for (const auto& one : j) laws.push_back(parse_distribution(one, rank));
  } else {
    laws.push_back(parse_distribution(j, rank));
  }
  return laws;
}

namespace {

json coord_stat_json(const CoordStat& s) {
  json j;
  j["exact_mean"] = s.exact_mean;
  j["exact_var"] = s.exact_var;
  j["empirical_mean"] = s.empirical_mean;
  j["mean_z"] = s.mean_z;
  j["fluct_var"] = s.fluct_var;
  j["anderson_darling"] = s.anderson_darling;
  j["ad_pass"] = s.ad_pass;
  return j;
}

}  // namespace

json asymptotics_json(const AsymptoticsReport& r) {
  json j;
  j["chain"] = r.chain;
  j["K"] = r.K;
  j["M"] = r.M;
  j["seed"] = r.seed;
  json coords = json::array();
  for (const auto& s : r.coords) coords.push_back(coord_stat_json(s));
  j["coords"] = coords;
  json pairings = json::array();
  for (const auto& s : r.pairings) pairings.push_back(coord_stat_json(s));
  j["pairings"] = pairings;
  j["cov_z"] = r.cov_z;
  j["max_abs_mean_z"] = r.max_abs_mean_z;
  j["max_abs_cov_z"] = r.max_abs_cov_z;
  j["max_anderson_darling"] = r.max_anderson_darling;
  j["ad_all_pass"] = r.ad_all_pass;
  return j;
}

json discrepancy_json(const DiscrepancyReport& r) {
  json j;
  j["K"] = r.K;
  j["M"] = r.M;
  j["seed"] = r.seed;
  j["epsilon"] = r.epsilon;
  j["k0"] = r.k0;
  j["coupling"] =
      "shared corner increment where the product kernel equals the shifted "
      "corner law, conditioned product move near walls";
  j["trajectories_with_late_violation"] = r.trajectories_with_late_violation;
  j["late_violation_fraction"] = r.late_violation_fraction;
  j["total_violations"] = r.total_violations;
  j["max_last_violation_k"] = r.max_last_violation_k;
  return j;
}

json oracle_json(const OracleReport& r) {
  json j;
  j["kind"] = r.kind;
  j["p"] = r.p;
  j["precision_exponent"] = r.n;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["precision_failures"] = r.precision_failures;
  j["unexpected_draws"] = r.unexpected;
  json atoms = json::array();
  for (const auto& a : r.atoms) {
    json e;
    e["cw"] = coweight_json(a.cw);
    e["exact"] = rat_str(a.exact);
    e["empirical"] = a.empirical;
    e["z"] = a.z;
    e["pass"] = a.pass;
    atoms.push_back(e);
  }
  j["atoms"] = atoms;
  j["chi2"] = r.chi2;
  j["dof"] = r.dof;
  j["max_abs_z"] = r.max_abs_z;
  j["ok"] = r.ok;
  return j;
}

void write_trajectories_csv(std::ostream& os, const std::vector<Trajectory>& trajs,
                            std::size_t rank) {
  os << "traj,k";
  for (std::size_t i = 1; i <= rank; ++i) os << ",lambda_" << i;
  for (std::size_t i = 1; i <= rank; ++i) os << ",nu_" << i;
  os << ",h_lambda,h_nu\n";
  for (std::size_t t = 0; t < trajs.size(); ++t) {
    const Trajectory& tr = trajs[t];
    const std::size_t K = std::max(tr.lambda.size(), tr.nu.size());
    for (std::size_t k = 0; k < K; ++k) {
      os << t << ',' << (k + 1);
      const bool has_l = k < tr.lambda.size();
      const bool has_n = k < tr.nu.size();
      for (std::size_t i = 0; i < rank; ++i)
        os << ',' << (has_l ? tr.lambda[k][i] : 0);
      for (std::size_t i = 0; i < rank; ++i) os << ',' << (has_n ? tr.nu[k][i] : 0);
      os << ',' << (has_l ? height(tr.lambda[k]) : 0) << ','
         << (has_n ? height(tr.nu[k]) : 0) << '\n';
    }
  }
}

}  // namespace hallwalk::io
