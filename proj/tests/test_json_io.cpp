#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "hallwalk/json_io.hpp"
#include "hallwalk/markov.hpp"

using namespace hallwalk;
using nlohmann::json;

TEST_CASE("coweights and cartan matrices round-trip through json") {
  const Coweight c{3, -1, 0};
  CHECK(io::parse_coweight(io::coweight_json(c)) == c);
  CHECK(io::parse_coweight(json::parse("[1,2]"), 2) == Coweight{1, 2});
  CHECK_THROWS_AS(io::parse_coweight(json::parse("[1,2]"), 3), ConfigError);
  CHECK_THROWS_AS(io::parse_coweight(json::parse("[1.5]")), ConfigError);
  CHECK_THROWS_AS(io::parse_coweight(json::parse("{}")), ConfigError);

  const CartanMatrix g2{{2, -3}, {-1, 2}};
  CHECK(io::parse_cartan(json::parse("[[2,-3],[-1,2]]")) == g2);
  CHECK_THROWS_AS(io::parse_cartan(json::parse("[[2,-3]]")), ConfigError);
  CHECK_THROWS_AS(io::parse_cartan(json::parse("[[2,-3],[-1,2.5]]")), ConfigError);
  CHECK_THROWS_AS(io::parse_cartan(json::parse("[]")), ConfigError);
}

TEST_CASE("polynomials serialize as ascending coefficient strings") {
  CHECK(io::tpoly_json(TPoly()) == json::array({"0"}));
  const TPoly f = TPoly(2) - TPoly::t() * TPoly::t();
  CHECK(io::tpoly_json(f) == json::array({"2", "0", "-1"}));
}

TEST_CASE("root system summaries carry the basic invariants") {
  RootSystem rs(cartan_for_family("A", 2));
  const json j = io::roots_json(rs);
  CHECK(j.at("rank") == 2);
  CHECK(j.at("num_positive_roots") == 3);
  CHECK(j.at("weyl_order") == 6);
  CHECK(j.at("two_rho_check") == json::array({2, 2}));
  CHECK(j.at("positive_roots").size() == 3);
}

TEST_CASE("expansion and structure-constant reports") {
  RootSystem rs(cartan_for_family("A", 1));
  const json h = io::hl_json(hl_expand(rs, {1}));
  CHECK(h.at("lambda") == json::array({1}));
  CHECK(h.at("terms").size() == 3);

  const json l = io::lr_json(lr_coefficients(rs, {1}, {1}));
  CHECK(l.at("mu") == json::array({1}));
  CHECK(l.at("coefficients").size() == 3);
}

TEST_CASE("distributions round-trip and reject malformed input") {
  LatticeDistribution::Map m;
  m.emplace(Coweight{1}, QQ(2, 3));
  m.emplace(Coweight{0}, QQ(1, 3));
  const LatticeDistribution d(std::move(m));
  CHECK(io::parse_distribution(io::distribution_json(d), 1) == d);

  CHECK(io::parse_distribution(
            json::parse(R"([{"cw":[0],"p":"1/2"},{"cw":[2],"p":"1/2"}])"), 1)
            .prob({2}) == QQ(1, 2));
  // integer masses are accepted
  CHECK(io::parse_distribution(json::parse(R"([{"cw":[4],"p":1}])"), 1)
            .is_point_mass({4}));

  // unknown keys, duplicates, bad mass, wrong rank
  CHECK_THROWS_AS(io::parse_distribution(
                      json::parse(R"([{"cw":[0],"p":"1","q":2}])"), 1),
                  ConfigError);
  CHECK_THROWS_AS(io::parse_distribution(
                      json::parse(R"([{"cw":[0],"p":"1/2"},{"cw":[0],"p":"1/2"}])"), 1),
                  ConfigError);
  CHECK_THROWS_AS(io::parse_distribution(json::parse(R"([{"cw":[0],"p":"1/3"}])"), 1),
                  ConfigError);
  CHECK_THROWS_AS(io::parse_distribution(json::parse(R"([{"cw":[0,0],"p":"1"}])"), 1),
                  ConfigError);
  CHECK_THROWS_AS(io::parse_distribution(json::parse("[]"), 1), ConfigError);
  CHECK_THROWS_AS(io::parse_distribution(json::parse(R"([{"cw":[0],"p":"1/0"}])"), 1),
                  ConfigError);
}

TEST_CASE("step laws come as one object or a per-step list") {
  const auto single = io::parse_step_laws(json::parse(R"([{"cw":[1],"p":"1"}])"), 1);
  CHECK(single.size() == 1);
  CHECK(single[0].is_point_mass({1}));

  const auto many = io::parse_step_laws(
      json::parse(R"([[{"cw":[1],"p":"1"}],[{"cw":[2],"p":"1"}]])"), 1);
  CHECK(many.size() == 2);
  CHECK(many[1].is_point_mass({2}));

  CHECK_THROWS_AS(io::parse_step_laws(json::parse("{}"), 1), ConfigError);
  CHECK_THROWS_AS(io::parse_step_laws(json::parse("[]"), 1), ConfigError);
}

TEST_CASE("trajectory csv layout is stable") {
  Trajectory t;
  t.seed = 7;
  t.lambda = {{1}, {2}};
  t.nu = {{0}, {1}};
  std::ostringstream os;
  io::write_trajectories_csv(os, {t}, 1);
  CHECK(os.str() ==
        "traj,k,lambda_1,nu_1,h_lambda,h_nu\n"
        "0,1,1,0,1,0\n"
        "0,2,2,1,2,1\n");

  // lambda-only trajectories pad the missing columns with zeros
  Trajectory l;
  l.lambda = {{3}};
  std::ostringstream os2;
  io::write_trajectories_csv(os2, {l}, 1);
  CHECK(os2.str() ==
        "traj,k,lambda_1,nu_1,h_lambda,h_nu\n"
        "0,1,3,0,3,0\n");
}

TEST_CASE("simulation reports serialize with stable keys") {
  RootSystem rs(cartan_for_family("A", 1));
  ProbabilityContext ctx(rs, QQ(2));
  KernelCache cache(ctx);
  LatticeDistribution::Map m;
  m.emplace(Coweight{1}, QQ(1));
  const auto steps = StepSequence::iid(rs, LatticeDistribution(std::move(m)));
  SimOptions opt;
  opt.K = 30;
  opt.M = 8;
  opt.seed = 2;

  const json a = io::asymptotics_json(corner_sum_report(cache, steps, opt));
  CHECK(a.at("chain") == "corner-sum");
  CHECK(a.at("K") == 30);
  CHECK(a.at("M") == 8);
  CHECK(a.at("coords").size() == 1);
  CHECK(a.at("coords")[0].contains("anderson_darling"));

  const json d = io::discrepancy_json(discrepancy_report(cache, steps, opt));
  CHECK(d.at("epsilon") == "1/2");
  CHECK(d.at("k0") == 100);
  CHECK(d.contains("late_violation_fraction"));
}
