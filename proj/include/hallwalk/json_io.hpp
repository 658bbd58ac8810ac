#ifndef HALLWALK_JSON_IO_HPP
#define HALLWALK_JSON_IO_HPP

// JSON and CSV wire formats for the CLI. Exact rationals travel as
// "num/den" strings so nothing is ever rounded; doubles appear only in
// statistics and serialize to round-trippable JSON numbers. Parsers are
// strict: unknown object keys are configuration errors.

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hallwalk/coweight.hpp"
#include "hallwalk/hall_littlewood.hpp"
#include "hallwalk/markov.hpp"
#include "hallwalk/padic.hpp"
#include "hallwalk/rational.hpp"
#include "hallwalk/root_system.hpp"
#include "hallwalk/satake.hpp"
#include "hallwalk/tpoly.hpp"

namespace hallwalk::io {

using nlohmann::json;

json coweight_json(const Coweight& c);
// rank 0 accepts any length
Coweight parse_coweight(const json& j, std::size_t rank = 0);
CartanMatrix parse_cartan(const json& j);

// Ascending coefficient strings, e.g. 1 - t^2 -> ["1", "0", "-1"].
json tpoly_json(const TPoly& f);

json roots_json(const RootSystem& rs);
json hl_json(const HLExpansion& e);
json lr_json(const LRTable& t);

json distribution_json(const LatticeDistribution& d);
LatticeDistribution parse_distribution(const json& j, std::size_t rank);
// Either one law (array of {"cw","p"} atoms) or an array of laws.
std::vector<LatticeDistribution> parse_step_laws(const json& j, std::size_t rank);

json asymptotics_json(const AsymptoticsReport& r);
json discrepancy_json(const DiscrepancyReport& r);
json oracle_json(const OracleReport& r);

// Header: traj,k,lambda_1..n,nu_1..n,h_lambda,h_nu. Trajectories that do
// not track one of the components leave its columns zero.
void write_trajectories_csv(std::ostream& os, const std::vector<Trajectory>& trajs,
                            std::size_t rank);

}  // namespace hallwalk::io

#endif
