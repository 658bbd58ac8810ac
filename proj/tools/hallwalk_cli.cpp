// Command-line front end. Every command prints a JSON result to stdout;
// --out <dir> additionally writes result.json (and trajectories.csv for
// simulation commands that keep paths). Exit codes: 0 success, 2 bad
// configuration, 3 violated invariant or exhausted p-adic precision,
// 1 anything unexpected.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hallwalk/errors.hpp"
#include "hallwalk/json_io.hpp"
#include "hallwalk/markov.hpp"
#include "hallwalk/padic.hpp"
#include "hallwalk/parallel.hpp"
#include "hallwalk/rng.hpp"
#include "hallwalk/satake.hpp"

namespace hw = hallwalk;
namespace io = hallwalk::io;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_json_flag(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw hw::ConfigError(std::string(what) + ": " + e.what());
  }
}

struct RootSystemFlags {
  std::string family;
  int rank = 0;
  std::string cartan;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family, "family letter A,B,C,D,E,F,G");
    cmd->add_option("--rank", rank, "rank for --family");
    cmd->add_option("--cartan", cartan, "explicit Cartan matrix as JSON rows");
  }

  hw::RootSystem build() const {
    if (!cartan.empty()) {
      if (!family.empty() || rank != 0)
        throw hw::ConfigError("give either --cartan or --family/--rank, not both");
      return hw::RootSystem(io::parse_cartan(parse_json_flag(cartan, "--cartan")));
    }
    if (family.empty() || rank <= 0)
      throw hw::ConfigError("need --family with --rank, or an explicit --cartan");
    return hw::RootSystem(hw::cartan_for_family(family, rank));
  }
};

struct OutputFlags {
  std::string out_dir;

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out_dir, "directory for result.json (and CSV)");
  }

  void emit(const json& result, const std::vector<hw::Trajectory>* trajs = nullptr,
            std::size_t rank = 0) const {
    std::cout << result.dump(2) << std::endl;
    if (out_dir.empty()) return;
    fs::create_directories(out_dir);
    {
      std::ofstream f(fs::path(out_dir) / "result.json");
      if (!f) throw hw::ConfigError("cannot write to " + out_dir);
      f << result.dump(2) << '\n';
    }
    if (trajs != nullptr) {
      std::ofstream f(fs::path(out_dir) / "trajectories.csv");
      if (!f) throw hw::ConfigError("cannot write to " + out_dir);
      io::write_trajectories_csv(f, *trajs, rank);
    }
  }
};

hw::Coweight parse_cw_flag(const std::string& text, std::size_t rank, const char* what) {
  return io::parse_coweight(parse_json_flag(text, what), rank);
}

hw::QQ parse_q_flag(const std::string& text) {
  try {
    return hw::parse_rat(text);
  } catch (const std::exception& e) {
    throw hw::ConfigError(std::string("--q: ") + e.what());
  }
}

int run_app(CLI::App& app, int argc, char** argv);

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spherical-function walk toolkit: exact Hall-Littlewood data, "
               "product/corner transition laws, lattice walks, p-adic checks"};
  app.require_subcommand(1);
  try {
    return run_app(app, argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const hw::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const hw::CartanError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const hw::PrecisionExhausted& e) {
    std::cerr << "precision exhausted: " << e.what() << '\n';
    return 3;
  } catch (const hw::InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return 3;
  } catch (const hw::CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

namespace {

int run_app(CLI::App& app, int argc, char** argv) {
  // roots
  auto* roots = app.add_subcommand("roots", "summarize a root system");
  RootSystemFlags roots_rs;
  roots_rs.attach(roots);
  OutputFlags roots_out;
  roots_out.attach(roots);

  // hl
  auto* hl = app.add_subcommand("hl", "spherical basis expansion of one P");
  RootSystemFlags hl_rs;
  hl_rs.attach(hl);
  OutputFlags hl_out;
  hl_out.attach(hl);
  std::string hl_lambda;
  hl->add_option("--lambda", hl_lambda, "dominant coweight, e.g. [1,0]")->required();

  // lr
  auto* lr = app.add_subcommand("lr", "structure constants of P_mu * P_nu");
  RootSystemFlags lr_rs;
  lr_rs.attach(lr);
  OutputFlags lr_out;
  lr_out.attach(lr);
  std::string lr_mu, lr_nu;
  lr->add_option("--mu", lr_mu)->required();
  lr->add_option("--nu", lr_nu)->required();

  // prob
  auto* prob = app.add_subcommand("prob", "exact probability laws at fixed q");
  prob->require_subcommand(1);
  RootSystemFlags prob_rs;
  std::string prob_q = "2";
  OutputFlags prob_out;
  std::string prob_lambda, prob_mu, prob_nu;
  std::int64_t tail_threshold = 0;
  bool with_tail = false;
  auto* prob_corners = prob->add_subcommand("corners", "corner law given lambda");
  auto* prob_product = prob->add_subcommand("product", "transition law of mu * nu");
  auto* prob_volume = prob->add_subcommand("volume", "double coset volume");
  auto* prob_g = prob->add_subcommand("g", "Hecke structure constant");
  for (auto* sub : {prob_corners, prob_product, prob_volume, prob_g}) {
    prob_rs.attach(sub);
    prob_out.attach(sub);
    sub->add_option("--q", prob_q, "residue cardinality, rational > 1");
  }
  prob_corners->add_option("--lambda", prob_lambda)->required();
  auto* tail_opt = prob_corners->add_option(
      "--tail-threshold", tail_threshold, "also report mass of height drops >= this");
  prob_product->add_option("--mu", prob_mu)->required();
  prob_product->add_option("--nu", prob_nu)->required();
  prob_volume->add_option("--lambda", prob_lambda)->required();
  prob_g->add_option("--mu", prob_mu)->required();
  prob_g->add_option("--nu", prob_nu)->required();
  prob_g->add_option("--lambda", prob_lambda)->required();

  // simulate
  auto* sim = app.add_subcommand("simulate", "lattice walks driven by the exact laws");
  sim->require_subcommand(1);
  RootSystemFlags sim_rs;
  OutputFlags sim_out;
  std::string sim_q = "2", sim_step, sim_epsilon = "1/2";
  std::size_t sim_K = 100, sim_M = 100;
  std::uint64_t sim_seed = 1;
  unsigned sim_threads = 1;
  std::int64_t sim_k0 = 100;
  bool sim_csv = false;
  auto* sim_chain = sim->add_subcommand("chain", "product chain trajectories");
  auto* sim_corners = sim->add_subcommand("corners", "corner-sum trajectories");
  auto* sim_lln = sim->add_subcommand("lln", "law of large numbers / CLT report");
  auto* sim_disc = sim->add_subcommand("discrepancy", "coupled height discrepancy");
  for (auto* sub : {sim_chain, sim_corners, sim_lln, sim_disc}) {
    sim_rs.attach(sub);
    sim_out.attach(sub);
    sub->add_option("--q", sim_q, "residue cardinality, rational > 1");
    sub->add_option("--step", sim_step, "step law JSON, one law or a per-step list")
        ->required();
    sub->add_option("--K", sim_K, "steps per trajectory");
    sub->add_option("--M", sim_M, "number of trajectories");
    sub->add_option("--seed", sim_seed, "master seed");
    sub->add_option("--threads", sim_threads, "worker threads");
    sub->add_flag("--csv", sim_csv, "keep and write full trajectories");
  }
  sim_disc->add_option("--epsilon", sim_epsilon, "height exponent in (0,1)");
  sim_disc->add_option("--k0", sim_k0, "late-violation cutoff index");

  // oracle
  auto* oracle = app.add_subcommand(
      "oracle", "validate exact laws against p-adic matrix sampling (type A)");
  oracle->require_subcommand(1);
  OutputFlags orc_out;
  int orc_n = 1;
  long orc_p = 2, orc_N = 0, orc_guard = 3;
  std::size_t orc_samples = 1000;
  std::uint64_t orc_seed = 1;
  unsigned orc_threads = 1;
  std::string orc_lambda, orc_mu;
  auto* orc_corners = oracle->add_subcommand("corners", "corner frequencies");
  auto* orc_product = oracle->add_subcommand("product", "product singular numbers");
  for (auto* sub : {orc_corners, orc_product}) {
    orc_out.attach(sub);
    sub->add_option("--n", orc_n, "rank: matrices are (n+1)x(n+1)")->required();
    sub->add_option("--p", orc_p, "prime residue cardinality")->required();
    sub->add_option("--N", orc_N, "precision exponent (0 = automatic)");
    sub->add_option("--samples", orc_samples, "Haar samples");
    sub->add_option("--seed", orc_seed, "master seed");
    sub->add_option("--threads", orc_threads, "worker threads");
    sub->add_option("--guard", orc_guard, "certified-digit safety margin");
    sub->add_option("--lambda", orc_lambda)->required();
  }
  orc_product->add_option("--mu", orc_mu)->required();

  app.parse(argc, argv);

  if (roots->parsed()) {
    const hw::RootSystem rs = roots_rs.build();
    roots_out.emit(io::roots_json(rs));
    return 0;
  }

  if (hl->parsed()) {
    const hw::RootSystem rs = hl_rs.build();
    const hw::Coweight lambda = parse_cw_flag(hl_lambda, rs.rank(), "--lambda");
    hl_out.emit(io::hl_json(hw::hl_expand(rs, lambda)));
    return 0;
  }

  if (lr->parsed()) {
    const hw::RootSystem rs = lr_rs.build();
    const hw::Coweight mu = parse_cw_flag(lr_mu, rs.rank(), "--mu");
    const hw::Coweight nu = parse_cw_flag(lr_nu, rs.rank(), "--nu");
    lr_out.emit(io::lr_json(hw::lr_coefficients(rs, mu, nu)));
    return 0;
  }

  if (prob->parsed()) {
    const hw::RootSystem rs = prob_rs.build();
    hw::ProbabilityContext ctx(rs, parse_q_flag(prob_q));
    json result;
    result["q"] = hw::rat_str(ctx.q());
    if (prob_corners->parsed()) {
      const hw::Coweight lambda = parse_cw_flag(prob_lambda, rs.rank(), "--lambda");
      result["lambda"] = io::coweight_json(lambda);
      result["law"] = io::distribution_json(ctx.corners_distribution(lambda));
      result["expected_corner_height"] = hw::rat_str(ctx.expected_corner_height(lambda));
      if (tail_opt->count() > 0) {
        with_tail = true;
        result["tail_threshold"] = tail_threshold;
        result["tail_mass"] = hw::rat_str(ctx.corner_tail_mass(lambda, tail_threshold));
      }
      (void)with_tail;
    } else if (prob_product->parsed()) {
      const hw::Coweight mu = parse_cw_flag(prob_mu, rs.rank(), "--mu");
      const hw::Coweight nu = parse_cw_flag(prob_nu, rs.rank(), "--nu");
      result["mu"] = io::coweight_json(mu);
      result["nu"] = io::coweight_json(nu);
      result["law"] = io::distribution_json(ctx.product_transition(mu, nu));
    } else if (prob_volume->parsed()) {
      const hw::Coweight lambda = parse_cw_flag(prob_lambda, rs.rank(), "--lambda");
      result["lambda"] = io::coweight_json(lambda);
      result["volume"] = hw::rat_str(ctx.orbit_volume(lambda));
    } else {
      const hw::Coweight mu = parse_cw_flag(prob_mu, rs.rank(), "--mu");
      const hw::Coweight nu = parse_cw_flag(prob_nu, rs.rank(), "--nu");
      const hw::Coweight lambda = parse_cw_flag(prob_lambda, rs.rank(), "--lambda");
      result["mu"] = io::coweight_json(mu);
      result["nu"] = io::coweight_json(nu);
      result["lambda"] = io::coweight_json(lambda);
      result["g"] = hw::rat_str(ctx.g_coefficient(mu, nu, lambda));
    }
    prob_out.emit(result);
    return 0;
  }

  if (sim->parsed()) {
    if (sim_K == 0 || sim_M == 0) throw hw::ConfigError("--K and --M must be positive");
    const hw::RootSystem rs = sim_rs.build();
    hw::ProbabilityContext ctx(rs, parse_q_flag(sim_q));
    hw::KernelCache cache(ctx);
    auto laws = io::parse_step_laws(parse_json_flag(sim_step, "--step"), rs.rank());
    const hw::StepSequence steps =
        laws.size() == 1 ? hw::StepSequence::iid(rs, std::move(laws[0]))
                         : hw::StepSequence::per_step(rs, std::move(laws));
    steps.require_steps(sim_K);
    hw::SimOptions opt;
    opt.K = sim_K;
    opt.M = sim_M;
    opt.seed = sim_seed;
    opt.threads = sim_threads;
    opt.keep_trajectories = sim_csv || !sim_out.out_dir.empty();
    opt.epsilon = hw::parse_rat(sim_epsilon);
    opt.k0 = sim_k0;

    if (sim_chain->parsed() || sim_corners->parsed()) {
      const bool product = sim_chain->parsed();
      std::vector<hw::Trajectory> trajs(opt.M);
      hw::parallel_indexed(opt.M, opt.threads, [&](std::size_t i) {
        hw::Rng rng(hw::derive_seed(opt.seed, i));
        trajs[i] = product ? hw::simulate_product_chain(cache, steps, opt.K, rng)
                           : hw::simulate_corner_sum(cache, steps, opt.K, rng);
        trajs[i].seed = opt.seed;
      });
      std::map<hw::Coweight, std::size_t, hw::GradedLess> finals;
      for (const auto& t : trajs)
        ++finals[product ? t.lambda.back() : t.nu.back()];
      json result;
      result["chain"] = product ? "product" : "corner-sum";
      result["K"] = opt.K;
      result["M"] = opt.M;
      result["seed"] = opt.seed;
      json fc = json::array();
      for (const auto& [cw, count] : finals) {
        json e;
        e["cw"] = io::coweight_json(cw);
        e["count"] = count;
        fc.push_back(e);
      }
      result["final_counts"] = fc;
      sim_out.emit(result, &trajs, rs.rank());
      return 0;
    }

    if (sim_lln->parsed()) {
      const hw::AsymptoticsReport rep = hw::lln_clt_report(cache, steps, opt);
      sim_out.emit(io::asymptotics_json(rep),
                   opt.keep_trajectories ? &rep.trajectories : nullptr, rs.rank());
      return 0;
    }

    const hw::DiscrepancyReport rep = hw::discrepancy_report(cache, steps, opt);
    sim_out.emit(io::discrepancy_json(rep),
                 opt.keep_trajectories ? &rep.trajectories : nullptr, rs.rank());
    return 0;
  }

  // oracle
  if (orc_n < 1) throw hw::ConfigError("--n must be at least 1");
  const hw::RootSystem rs(hw::cartan_for_family("A", orc_n));
  hw::ProbabilityContext ctx(rs, hw::QQ(orc_p));
  hw::OracleOptions opt;
  opt.samples = orc_samples;
  opt.n = orc_N;
  opt.seed = orc_seed;
  opt.threads = orc_threads;
  opt.guard = orc_guard;
  const hw::Coweight lambda = parse_cw_flag(orc_lambda, rs.rank(), "--lambda");
  hw::OracleReport rep;
  if (orc_corners->parsed()) {
    rep = hw::validate_corners(ctx, orc_p, lambda, opt);
  } else {
    const hw::Coweight mu = parse_cw_flag(orc_mu, rs.rank(), "--mu");
    rep = hw::validate_products(ctx, orc_p, mu, lambda, opt);
  }
  orc_out.emit(io::oracle_json(rep));
  if (rep.precision_failures > 0) {
    std::cerr << "precision exhausted on " << rep.precision_failures << " samples\n";
    return 3;
  }
  if (rep.unexpected > 0) {
    std::cerr << rep.unexpected << " draws outside the exact support\n";
    return 3;
  }
  return 0;
}

}  // namespace
