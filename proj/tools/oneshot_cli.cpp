// Batch front end: every stochastic command is bit-reproducible given --seed.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "oneshot/asymptotics.hpp"
#include "oneshot/io.hpp"
#include "oneshot/mac.hpp"
#include "oneshot/slepian_wolf.hpp"

using nlohmann::json;
using namespace oneshot;

namespace {

struct CommonOpts {
  std::string out;
  std::string format = "json";
  std::uint64_t cap = 0;  // 0 = defaults

  EnumCaps caps() const {
    EnumCaps c;
    if (cap) {
      c.joint = cap;
      c.alphabet = cap;
    }
    return c;
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--out", opts.out, "write the report to a file instead of stdout");
  cmd->add_option("--format", opts.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--cap", opts.cap, "override the enumeration caps");
}

void emit(const CommonOpts& opts, const std::string& text) {
  if (opts.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(opts.out, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + opts.out + "'");
  f << text;
}

void emit_json(const CommonOpts& opts, const json& j) { emit(opts, j.dump(2) + "\n"); }

EpsilonBudget parse_budget(double eps, const std::string& split) {
  if (split.empty()) return EpsilonBudget::equal_split(eps);
  std::vector<double> parts;
  std::stringstream ss(split);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(std::stod(item));
  if (parts.size() != 4) throw DomainError("--eps-split needs exactly four comma-separated values");
  return EpsilonBudget::with_parts(eps, parts[0], parts[1], parts[2], parts[3]);
}

SimMode parse_mode(const std::string& mode) {
  return mode == "exact" ? SimMode::exact_per_seed : SimMode::per_draw;
}

std::string double_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json region_json(const SwRateRegion& r) {
  return json{{"delta", r.delta},
              {"achievable", {{"l_x", r.achievable_x}, {"l_y", r.achievable_y}, {"l_sum", r.achievable_sum}}},
              {"clamped", {{"l_x", r.clamped_x}, {"l_y", r.clamped_y}, {"l_sum", r.clamped_sum}}},
              {"lower",
               {{"l_x", r.lower.l_x},
                {"l_y", r.lower.l_y},
                {"l_sum", r.lower.l_sum},
                {"l_x_heuristic", r.lower.l_x_heuristic},
                {"l_y_heuristic", r.lower.l_y_heuristic}}},
              {"eps", r.budget.total},
              {"eps_split", {r.budget.parts[0], r.budget.parts[1], r.budget.parts[2], r.budget.parts[3]}},
              {"xi", {{"XY", io::xi_to_json(r.xi_xy)}, {"X", io::xi_to_json(r.xi_x)}, {"Y", io::xi_to_json(r.xi_y)}}}};
}

json mac_region_json(const MacRateRegion& r, unsigned c1, unsigned c2) {
  return json{{"delta", r.delta},
              {"c1_max", r.c1_max},
              {"c2_max", r.c2_max},
              {"sum_max", r.sum_max},
              {"picked", {{"c1", c1}, {"c2", c2}}},
              {"eps", r.budget.total},
              {"eps_split", {r.budget.parts[0], r.budget.parts[1], r.budget.parts[2], r.budget.parts[3]}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-shot source and channel coding laboratory"};
  app.require_subcommand(1);

  // entropy
  std::string pmf_path;
  std::vector<double> alphas;
  CommonOpts entropy_opts;
  auto* cmd_entropy = app.add_subcommand("entropy", "all entropy orders of a distribution file");
  cmd_entropy->add_option("--pmf", pmf_path, "distribution JSON file")->required();
  cmd_entropy->add_option("--alpha", alphas, "additional finite orders to evaluate");
  add_common(cmd_entropy, entropy_opts);

  // smooth
  std::string smooth_path, smooth_order;
  double smooth_eps = 0.0;
  CommonOpts smooth_opts;
  auto* cmd_smooth = app.add_subcommand("smooth", "smooth entropy of a distribution file");
  cmd_smooth->add_option("--pmf", smooth_path, "distribution JSON file")->required();
  cmd_smooth->add_option("--order", smooth_order, "entropy order: 0, inf or -inf")
      ->required()
      ->check(CLI::IsMember({"0", "inf", "-inf"}));
  cmd_smooth->add_option("--eps", smooth_eps, "smoothing budget in [0,1)")->required();
  CommonOpts* smooth_common = &smooth_opts;
  add_common(cmd_smooth, *smooth_common);

  // typical
  std::string typical_path;
  double typical_delta = 0.0;
  CommonOpts typical_opts;
  auto* cmd_typical = app.add_subcommand("typical", "build a typical set and report members/tail");
  cmd_typical->add_option("--pmf", typical_path, "distribution JSON file")->required();
  cmd_typical->add_option("--delta", typical_delta, "window parameter in [0,1)")->required();
  add_common(cmd_typical, typical_opts);

  // find-delta
  std::string fd_path;
  double fd_eps = 0.0, fd_step = 0.005;
  CommonOpts fd_opts;
  auto* cmd_fd = app.add_subcommand("find-delta", "smallest grid delta meeting a tail target");
  cmd_fd->add_option("--pmf", fd_path, "distribution JSON file")->required();
  cmd_fd->add_option("--eps", fd_eps, "tail target eps0 in (0,1)")->required();
  cmd_fd->add_option("--delta-step", fd_step, "grid step (default 0.005)");
  add_common(cmd_fd, fd_opts);

  // sw-region / sw-sim share inputs
  struct SwOpts {
    std::string pmf;
    double eps = 0.0;
    std::string split;
    std::optional<double> delta;
    double step = 0.005;
    int n = 1;
    CommonOpts common;
  };
  SwOpts swr, sws;
  std::uint64_t sw_trials = 10000, sw_seed = 0;
  std::optional<unsigned> sw_lx, sw_ly;
  std::string sw_mode = "draw";

  const auto add_sw = [](CLI::App* cmd, SwOpts& o) {
    cmd->add_option("--pmf", o.pmf, "arity-2 joint JSON file")->required();
    cmd->add_option("--eps", o.eps, "total error budget")->required();
    cmd->add_option("--eps-split", o.split, "four comma-separated budget parts");
    cmd->add_option("--delta", o.delta, "window parameter (default: smallest feasible)");
    cmd->add_option("--delta-step", o.step, "grid step for the delta search");
    cmd->add_option("--n", o.n, "i.i.d. blocklength applied to the input joint");
    add_common(cmd, o.common);
  };
  auto* cmd_swr = app.add_subcommand("sw-region", "distributed-coding lower bounds and achievable lengths");
  add_sw(cmd_swr, swr);
  auto* cmd_sws = app.add_subcommand("sw-sim", "hash-protocol error simulation");
  add_sw(cmd_sws, sws);
  cmd_sws->add_option("--trials", sw_trials, "Monte Carlo trials");
  cmd_sws->add_option("--seed", sw_seed, "master seed")->required();
  cmd_sws->add_option("--lx", sw_lx, "override the first encoder's code bits");
  cmd_sws->add_option("--ly", sw_ly, "override the second encoder's code bits");
  cmd_sws->add_option("--mode", sw_mode, "draw | exact")->check(CLI::IsMember({"draw", "exact"}));

  // mac-region / mac-sim
  struct MacOpts {
    std::string px, py, channel;
    double eps = 0.0;
    std::string split;
    std::optional<double> delta;
    double step = 0.005;
    int n = 1;
    CommonOpts common;
  };
  MacOpts macr, macs;
  std::uint64_t mac_trials = 10000, mac_seed = 0;
  std::optional<unsigned> mac_c1, mac_c2;
  std::string mac_mode = "draw";

  const auto add_mac = [](CLI::App* cmd, MacOpts& o) {
    cmd->add_option("--px", o.px, "first input marginal JSON file")->required();
    cmd->add_option("--py", o.py, "second input marginal JSON file")->required();
    cmd->add_option("--channel", o.channel, "two-input channel JSON file")->required();
    cmd->add_option("--eps", o.eps, "total error budget")->required();
    cmd->add_option("--eps-split", o.split, "four comma-separated budget parts");
    cmd->add_option("--delta", o.delta, "window parameter (default: smallest feasible)");
    cmd->add_option("--delta-step", o.step, "grid step for the delta search");
    cmd->add_option("--n", o.n, "memoryless blocklength");
    add_common(cmd, o.common);
  };
  auto* cmd_macr = app.add_subcommand("mac-region", "two-user channel achievable rate caps");
  add_mac(cmd_macr, macr);
  auto* cmd_macs = app.add_subcommand("mac-sim", "random-codebook error simulation");
  add_mac(cmd_macs, macs);
  cmd_macs->add_option("--trials", mac_trials, "Monte Carlo trials");
  cmd_macs->add_option("--seed", mac_seed, "master seed")->required();
  cmd_macs->add_option("--c1", mac_c1, "override sender 1 rate bits");
  cmd_macs->add_option("--c2", mac_c2, "override sender 2 rate bits");
  cmd_macs->add_option("--mode", mac_mode, "draw | exact")->check(CLI::IsMember({"draw", "exact"}));

  // asym-scan
  std::string asym_path;
  double asym_eps = 0.0;
  int asym_nmax = 10;
  CommonOpts asym_opts;
  auto* cmd_asym = app.add_subcommand("asym-scan", "blocklength convergence table");
  cmd_asym->add_option("--pmf", asym_path, "single-axis distribution JSON file")->required();
  cmd_asym->add_option("--eps", asym_eps, "smoothing budget")->required();
  cmd_asym->add_option("--n-max", asym_nmax, "largest blocklength");
  add_common(cmd_asym, asym_opts);

  // hash-check
  unsigned hash_bits = 3, hash_len = 2;
  bool hash_exact = false;
  std::uint64_t hash_trials = 100000, hash_seed = 0;
  CommonOpts hash_opts;
  auto* cmd_hash = app.add_subcommand("hash-check", "two-universal collision statistics");
  cmd_hash->add_option("--bits", hash_bits, "input bits b (domain 2^b)")->required();
  cmd_hash->add_option("--len", hash_len, "output bits")->required();
  cmd_hash->add_flag("--exact", hash_exact, "enumerate all seeds (requires len*bits <= 24)");
  cmd_hash->add_option("--trials", hash_trials, "Monte Carlo trials");
  cmd_hash->add_option("--seed", hash_seed, "master seed (required unless --exact)");
  add_common(cmd_hash, hash_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*cmd_entropy) {
      const JointPmf joint = io::load_joint(pmf_path);
      const Pmf flat = joint.flattened();
      json out{{"shannon", shannon(flat)},
               {"h0", renyi(flat, EntropyOrder::zero())},
               {"hinf", renyi(flat, EntropyOrder::infinity())},
               {"hneginf", renyi(flat, EntropyOrder::neg_infinity())}};
      for (double a : alphas) out["alpha_" + double_str(a)] = renyi(flat, EntropyOrder::finite(a));
      emit_json(entropy_opts, out);
    } else if (*cmd_smooth) {
      const Pmf flat = io::load_joint(smooth_path).flattened();
      const SmoothingResult result =
          smooth_order == "0"     ? smooth_h0(flat, smooth_eps)
          : smooth_order == "inf" ? smooth_hinf(flat, smooth_eps)
                                  : smooth_hneginf(flat, smooth_eps);
      emit_json(smooth_opts, json{{"order", smooth_order},
                                  {"eps", smooth_eps},
                                  {"value", result.value_bits},
                                  {"moved_mass", result.moved_mass},
                                  {"method", result.method == SmoothingMethod::exact_greedy
                                                 ? "exact_greedy"
                                                 : "greedy_heuristic"},
                                  {"witness", result.witness.masses()}});
    } else if (*cmd_typical) {
      const JointPmf joint = io::load_joint(typical_path);
      emit_json(typical_opts, io::typical_set_to_json(TypicalSet(joint, typical_delta, typical_opts.caps())));
    } else if (*cmd_fd) {
      const JointPmf joint = io::load_joint(fd_path);
      const double delta = find_delta(joint, fd_eps, fd_step, fd_opts.caps());
      emit_json(fd_opts, json{{"delta", delta},
                              {"tail", TypicalSet(joint, delta, fd_opts.caps()).tail()}});
    } else if (*cmd_swr || *cmd_sws) {
      SwOpts& o = *cmd_swr ? swr : sws;
      JointPmf joint = io::load_joint(o.pmf);
      if (o.n > 1) joint = iid_extension(joint, o.n, o.common.caps());
      const EpsilonBudget budget = parse_budget(o.eps, o.split);
      const double delta =
          o.delta ? *o.delta : find_delta(joint, budget.parts[0], o.step, o.common.caps());
      const SwRateRegion region = sw_achievable_region(joint, budget, delta, o.common.caps());
      if (*cmd_swr) {
        emit_json(o.common, region_json(region));
      } else {
        auto [lx, ly] = sw_pick_lengths(region);
        if (sw_lx) lx = *sw_lx;
        if (sw_ly) ly = *sw_ly;
        SimulationReport report =
            sw_simulate(joint, lx, ly, delta, sw_trials, sw_seed, o.eps, budget.parts[0],
                        parse_mode(sw_mode), o.common.caps());
        json j = io::report_to_json(report);
        j["lengths"] = {{"l_x", lx}, {"l_y", ly}};
        j["seed"] = sw_seed;
        if (o.common.format == "csv")
          emit(o.common, report_csv_header() + "\n" + report_csv_row(report) + "\n");
        else
          emit_json(o.common, j);
      }
    } else if (*cmd_macr || *cmd_macs) {
      MacOpts& o = *cmd_macr ? macr : macs;
      const Pmf px = io::load_joint(o.px).flattened();
      const Pmf py = io::load_joint(o.py).flattened();
      const Channel ch = io::load_channel(o.channel);
      const JointPmf per_copy = induced_joint(px, py, ch);
      const EpsilonBudget budget = parse_budget(o.eps, o.split);
      const double delta = o.delta
                               ? *o.delta
                               : mac_find_delta(per_copy, o.n, budget.parts[0], o.step, o.common.caps());
      const TripleContext ctx(per_copy, o.n, delta, o.common.caps());
      const MacRateRegion region = mac_achievable_region(ctx, budget);
      auto [c1, c2] = mac_pick_rates(region);
      if (*cmd_macr) {
        emit_json(o.common, mac_region_json(region, c1, c2));
      } else {
        if (mac_c1) c1 = *mac_c1;
        if (mac_c2) c2 = *mac_c2;
        SimulationReport report = mac_simulate(px, py, ch, o.n, c1, c2, ctx, mac_trials, mac_seed,
                                               o.eps, region, parse_mode(mac_mode));
        json j = io::report_to_json(report);
        j["rates"] = {{"c1", c1}, {"c2", c2}};
        j["seed"] = mac_seed;
        if (o.common.format == "csv")
          emit(o.common, report_csv_header() + "\n" + report_csv_row(report) + "\n");
        else
          emit_json(o.common, j);
      }
    } else if (*cmd_asym) {
      const Pmf p = io::load_joint(asym_path).flattened();
      const auto rows = convergence_scan(p, asym_eps, asym_nmax, asym_opts.caps());
      if (asym_opts.format == "csv") {
        std::string text = "n,value,companion,target\n";
        for (const auto& r : rows)
          text += std::to_string(r.n) + "," + double_str(r.value_per_n) + "," +
                  double_str(r.companion_per_n) + "," + double_str(r.target) + "\n";
        emit(asym_opts, text);
      } else {
        json arr = json::array();
        for (const auto& r : rows)
          arr.push_back({{"n", r.n},
                         {"value", r.value_per_n},
                         {"companion", r.companion_per_n},
                         {"target", r.target}});
        emit_json(asym_opts, arr);
      }
    } else if (*cmd_hash) {
      CollisionStats stats;
      if (hash_exact) {
        stats = collision_probability_exact(std::uint64_t{1} << hash_bits, hash_len);
      } else {
        if (cmd_hash->count("--seed") == 0)
          throw DomainError("--seed is required for the Monte Carlo mode");
        RngStream rng(hash_seed);
        stats = collision_probability_monte_carlo(std::uint64_t{1} << hash_bits, hash_len,
                                                  hash_trials, rng);
      }
      emit_json(hash_opts, json{{"input_bits", hash_bits},
                                {"output_bits", hash_len},
                                {"exact", stats.exact},
                                {"trials", stats.trials},
                                {"max_pair_probability", stats.max_pair_probability},
                                {"mean_pair_probability", stats.mean_pair_probability},
                                {"expected", hash_len >= 64 ? 0.0 : std::exp2(-double(hash_len))}});
    }
  } catch (const ResourceCapError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 4;
  } catch (const InfeasibilityError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
