// ils: integer least-squares workbench.
//
//   ils gen <kind> <n> <seed> <out>          synthesize a problem file
//   ils defect <input> [--transform M]      orthogonality defect
//   ils reduce <input> [...]                LLL-type reduction, writes U/D/M
//   ils solve <input> [...]                 nearest point / n best / ellipsoid
//   ils bench [...]                         reduction + search timing table
//
// Exit codes: 0 ok, 1 usage or internal error, 2 parse error,
// 3 not positive definite, 4 integer overflow, 5 capacity exceeded.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ils/ils.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

ils::MatrixFile load_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ils::ParseError("cannot open '" + path + "'");
  return ils::read_matrix_file(in);
}

ils::SpdMatrix as_spd(ils::Matrix m) {
  try {
    return ils::SpdMatrix(std::move(m));
  } catch (const std::invalid_argument& e) {
    throw ils::ParseError(std::string("invalid quadratic form: ") + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

std::string format_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", s);
  return buf;
}

std::string format_ratio(double r) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", r);
  return buf;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

struct ReduceFlags {
  double omega = ils::kDefaultOmega;
  bool classic = false;
};

std::pair<ils::ReductionState, ils::LllReport> run_reduction(
    const ils::SpdMatrix& q, const std::vector<double>& vhat,
    const ReduceFlags& flags) {
  return flags.classic ? ils::lll_original(q, vhat, flags.omega)
                       : ils::lll_delayed(q, vhat, flags.omega);
}

int cmd_gen(const std::string& kind, int n, std::uint64_t seed,
            const std::string& out_path) {
  const auto inst = ils::gen(ils::instance_kind_from_string(kind), n, seed);
  std::ostringstream os;
  ils::write_matrix_file(os, inst.q.matrix(), &inst.vhat);
  if (out_path == "-")
    std::cout << os.str();
  else
    write_file(out_path, os.str());
  return 0;
}

int cmd_defect(const std::string& input, const std::string& transform_path) {
  const auto file = load_input(input);
  const auto q = as_spd(file.q);
  double value = 0.0;
  if (transform_path.empty()) {
    value = ils::defect_log(ils::udu_factorize(q));
  } else {
    std::ifstream min(transform_path);
    if (!min) throw ils::ParseError("cannot open '" + transform_path + "'");
    value = ils::defect_direct(q, ils::read_int_matrix(min));
  }
  std::cout << ils::format_real_pointed(value) << "\n";
  return 0;
}

int cmd_reduce(const std::string& input, const ReduceFlags& flags,
               std::string out_prefix) {
  const auto file = load_input(input);
  const auto q = as_spd(file.q);
  const std::vector<double> vhat =
      file.vhat ? *file.vhat : std::vector<double>(q.size(), 0.0);
  const auto [state, report] = run_reduction(q, vhat, flags);

  if (out_prefix.empty()) out_prefix = input;
  {
    std::ostringstream os;
    ils::write_matrix_file(os, state.factors.u);
    write_file(out_prefix + ".U", os.str());
  }
  {
    std::ostringstream os;
    ils::write_diagonal(os, state.factors.d);
    write_file(out_prefix + ".D", os.str());
  }
  {
    std::ostringstream os;
    ils::write_int_matrix(os, state.transform.matrix());
    write_file(out_prefix + ".M", os.str());
  }
  std::cerr << "reduce: variant=" << (flags.classic ? "classic" : "delayed")
            << " omega=" << ils::format_real_pointed(report.omega)
            << " swaps=" << report.swap_count
            << " reduces=" << report.reduce_count
            << " defect_before=" << ils::format_real_pointed(report.defect_before)
            << " defect_after=" << ils::format_real_pointed(report.defect_after)
            << "\n";
  return 0;
}

struct SolveFlags {
  ReduceFlags reduce;
  bool no_reduce = false;
  int best = 0;       // 0: plain nearest-point search
  double radius = 0;  // > 0: ellipsoid enumeration
  bool use_radius = false;
};

int cmd_solve(const std::string& input, const SolveFlags& flags) {
  const auto file = load_input(input);
  const auto q = as_spd(file.q);
  if (!file.vhat)
    throw ils::ParseError("solve needs a 'vhat:' line in the input");
  const std::vector<double>& vhat = *file.vhat;

  ils::SolveResult result;
  double defect_before = 0.0, defect_after = 0.0;

  const auto search = [&](const ils::UduFactorization& f,
                          const std::vector<double>& v) {
    if (flags.use_radius) return ils::dsc(f, v, flags.radius);
    if (flags.best > 0) return ils::dns(f, v, flags.best);
    return ils::ds(f, v);
  };

  if (flags.no_reduce) {
    const auto f = ils::udu_factorize(q);
    defect_before = defect_after = ils::defect_log(f);
    result = search(f, vhat);
  } else {
    const auto [state, report] = run_reduction(q, vhat, flags.reduce);
    defect_before = report.defect_before;
    defect_after = report.defect_after;
    result = search(state.factors, state.vhat);
    for (auto& sol : result.solutions)
      sol.v = ils::map_back(state.transform, sol.v);
  }

  ils::write_result_record(std::cout, result, defect_before, defect_after);
  return 0;
}

struct BenchFlags {
  int n = 40;
  int trials = 5;
  std::uint64_t seed = 1;
  double omega = ils::kDefaultOmega;
};

int cmd_bench(const BenchFlags& flags) {
  std::vector<double> t_classic, t_delayed, terms_ratio, t_ds_ratio;

  for (int trial = 0; trial < flags.trials; ++trial) {
    const auto inst = ils::gen(ils::InstanceKind::kIllConditioned, flags.n,
                               flags.seed + static_cast<std::uint64_t>(trial));

    auto start = Clock::now();
    const auto classic = ils::lll_original(inst.q, inst.vhat, flags.omega);
    const double tc = seconds_since(start);

    start = Clock::now();
    const auto delayed = ils::lll_delayed(inst.q, inst.vhat, flags.omega);
    const double td = seconds_since(start);

    ils::SearchOptions cached;
    ils::SearchOptions direct;
    direct.use_cache = false;

    start = Clock::now();
    const auto ds_cached = ils::ds(delayed.first.factors, delayed.first.vhat, cached);
    const double tdsc = seconds_since(start);

    start = Clock::now();
    const auto ds_direct = ils::ds(delayed.first.factors, delayed.first.vhat, direct);
    const double tdsd = seconds_since(start);

    t_classic.push_back(tc);
    t_delayed.push_back(td);
    terms_ratio.push_back(static_cast<double>(ds_cached.stats.cond_terms) /
                          std::max(1.0, static_cast<double>(ds_direct.stats.cond_terms)));
    t_ds_ratio.push_back(tdsc / std::max(1e-12, tdsd));

    std::cout << "trial=" << trial
              << " t_classic=" << format_seconds(tc)
              << " t_delayed=" << format_seconds(td)
              << " swaps_classic=" << classic.second.swap_count
              << " swaps_delayed=" << delayed.second.swap_count
              << " ds_terms_cached=" << ds_cached.stats.cond_terms
              << " ds_terms_direct=" << ds_direct.stats.cond_terms
              << " t_ds_cached=" << format_seconds(tdsc)
              << " t_ds_direct=" << format_seconds(tdsd)
              << "\n";
  }

  std::cout << "# summary lll_time_ratio="
            << format_ratio(median(t_delayed) / std::max(1e-12, median(t_classic)))
            << " ds_terms_ratio=" << format_ratio(median(terms_ratio))
            << " ds_time_ratio=" << format_ratio(median(t_ds_ratio)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"integer least-squares workbench"};
  app.require_subcommand(1);

  // gen
  std::string gen_kind, gen_out;
  int gen_n = 0;
  std::uint64_t gen_seed = 0;
  auto* gen_cmd = app.add_subcommand("gen", "synthesize a problem file");
  gen_cmd->add_option("kind", gen_kind, "random-spd | ill-conditioned | diagonal")
      ->required();
  gen_cmd->add_option("n", gen_n, "dimension")->required();
  gen_cmd->add_option("seed", gen_seed, "64-bit seed")->required();
  gen_cmd->add_option("out", gen_out, "output path, or - for stdout")->required();

  // defect
  std::string defect_input, defect_transform;
  auto* defect_cmd = app.add_subcommand("defect", "orthogonality defect");
  defect_cmd->add_option("input", defect_input, "problem file")->required();
  defect_cmd->add_option("--transform", defect_transform,
                         "integer transform file (direct formula)");

  // reduce
  std::string reduce_input, reduce_out;
  ReduceFlags reduce_flags;
  bool reduce_classic = false, reduce_delayed = false;
  auto* reduce_cmd = app.add_subcommand("reduce", "LLL-type basis reduction");
  reduce_cmd->add_option("input", reduce_input, "problem file")->required();
  reduce_cmd->add_option("--omega", reduce_flags.omega, "relaxation in (1/4, 1]");
  auto* rc = reduce_cmd->add_flag("--classic", reduce_classic,
                                  "original one-step reduction");
  reduce_cmd->add_flag("--delayed", reduce_delayed,
                       "delayed size-reduction (default)")
      ->excludes(rc);
  reduce_cmd->add_option("--out", reduce_out,
                         "output prefix for .U/.D/.M (default: input path)");

  // solve
  std::string solve_input;
  SolveFlags solve_flags;
  bool solve_classic = false, solve_delayed = false;
  auto* solve_cmd = app.add_subcommand("solve", "discrete search");
  solve_cmd->add_option("input", solve_input, "problem file with vhat")->required();
  auto* best_opt =
      solve_cmd->add_option("--best", solve_flags.best, "number of best points");
  auto* radius_opt = solve_cmd->add_option("--radius", solve_flags.radius,
                                           "enumerate the ellipsoid q <= radius");
  best_opt->excludes(radius_opt);
  radius_opt->excludes(best_opt);
  solve_cmd->add_flag("--no-reduce", solve_flags.no_reduce,
                      "search in the standard basis");
  solve_cmd->add_option("--omega", solve_flags.reduce.omega,
                        "relaxation in (1/4, 1]");
  auto* sc = solve_cmd->add_flag("--classic", solve_classic,
                                 "original reduction variant");
  solve_cmd->add_flag("--delayed", solve_delayed, "delayed variant (default)")
      ->excludes(sc);

  // bench
  BenchFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "timing table");
  bench_cmd->add_option("--n", bench_flags.n, "dimension");
  bench_cmd->add_option("--trials", bench_flags.trials, "instances to run");
  bench_cmd->add_option("--seed", bench_flags.seed, "base seed");
  bench_cmd->add_option("--omega", bench_flags.omega, "relaxation in (1/4, 1]");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen_kind, gen_n, gen_seed, gen_out);
    if (defect_cmd->parsed()) return cmd_defect(defect_input, defect_transform);
    if (reduce_cmd->parsed()) {
      reduce_flags.classic = reduce_classic;
      return cmd_reduce(reduce_input, reduce_flags, reduce_out);
    }
    if (solve_cmd->parsed()) {
      solve_flags.reduce.classic = solve_classic;
      solve_flags.use_radius = radius_opt->count() > 0;
      return cmd_solve(solve_input, solve_flags);
    }
    if (bench_cmd->parsed()) return cmd_bench(bench_flags);
  } catch (const ils::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ils::NotPositiveDefinite& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ils::IntegerOverflow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const ils::CapacityExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
