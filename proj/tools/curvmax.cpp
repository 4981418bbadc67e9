// curvmax command-line tool: solve / opt / verify / bench / gen-corpus over
// JSON instance files. Exit codes: 0 success, 1 failed check, 2 input error,
// 3 resource error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvmax/curvmax.hpp"

namespace fs = std::filesystem;
using curvmax::json;

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitResourceError = 3;

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit(const json& report, const std::string& output_path) {
  const std::string text = report.dump(2) + "\n";
  if (output_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(output_path);
    if (!out) throw curvmax::InputError("cannot write output file: " + output_path);
    out << text;
  }
}

void print_warnings(const curvmax::Instance& inst) {
  for (const std::string& w : inst.warnings) std::cerr << "warning: " << w << "\n";
}

struct SolveFlags {
  double epsilon = 0.1;
  int ell = 0;
  std::string gamma = "1";
  double gamma_min = 0.05;
  double eta = 0.5;
  bool trace = false;
  bool validate = false;
  bool stable_output = false;
  int threads = 0;
  std::string output;
};

curvmax::RunReport run_solver(const curvmax::Instance& inst, const SolveFlags& flags) {
  curvmax::SearchConfig cfg;
  cfg.ell = flags.ell;
  cfg.record_trace = flags.trace;
  cfg.threads = flags.threads;
  if (flags.gamma == "auto") {
    if (!inst.l_weights) {
      throw curvmax::InputError(
          "--gamma auto needs an explicit l_weights array in the instance file");
    }
    return curvmax::gamma_guessing_solve(inst.f, *inst.l_weights, *inst.matroid, flags.epsilon,
                                         flags.gamma_min, flags.eta, cfg);
  }
  try {
    cfg.gamma = std::stod(flags.gamma);
  } catch (const std::exception&) {
    throw curvmax::InputError("--gamma: expected a number in (0,1] or 'auto'");
  }
  return curvmax::solve_with_curvature(inst.f, *inst.matroid, flags.epsilon, cfg);
}

int cmd_solve(const std::string& path, const SolveFlags& flags) {
  curvmax::Instance inst = curvmax::load_instance(path, {.validate = flags.validate});
  print_warnings(inst);
  curvmax::RunReport report = run_solver(inst, flags);
  if (flags.stable_output) report.wall_time_ms = 0.0;
  emit(curvmax::report_to_json(report), flags.output);
  return 0;
}

int cmd_opt(const std::string& path, const std::string& output, bool stable_output) {
  curvmax::Instance inst = curvmax::load_instance(path);
  print_warnings(inst);
  const auto start = std::chrono::steady_clock::now();
  const curvmax::BruteForceResult result = curvmax::brute_force_opt(*inst.f, *inst.matroid);
  json j;
  j["opt_set"] = result.opt_set.to_vector();
  j["opt_value"] = result.opt_value;
  j["enumerated"] = result.enumerated;
  j["wall_time_ms"] =
      stable_output
          ? 0.0
          : std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
  emit(j, output);
  return 0;
}

int cmd_verify(const std::string& path, SolveFlags flags, bool no_validate) {
  flags.validate = !no_validate;
  curvmax::Instance inst = curvmax::load_instance(path, {.validate = flags.validate});
  print_warnings(inst);

  const std::uint64_t calls_before = inst.f->eval_count();
  const double kappa = curvmax::curvature(*inst.f);
  const curvmax::Decomposition decomp = curvmax::decompose(inst.f, kappa);
  const int cap = curvmax::default_ell_cap();
  const int ell = flags.ell > 0 ? flags.ell : curvmax::smallest_ell(flags.epsilon, 1.0, cap);
  const auto params = curvmax::PotentialParams::make(ell, 1.0, cap);

  curvmax::SearchConfig cfg;
  cfg.epsilon = flags.epsilon;
  cfg.ell = flags.ell;  // 0 keeps the default smallest_ell path downstream
  cfg.threads = flags.threads;
  curvmax::RunReport run = curvmax::local_search(decomp, *inst.matroid, params, cfg);
  run.kappa = kappa;
  run.oracle_calls = inst.f->eval_count() - calls_before;
  run.guarantee = flags.ell > 0
                      ? curvmax::explicit_guarantee(kappa, ell, 1.0, flags.epsilon)
                      : 1.0 - kappa / std::exp(1.0) - flags.epsilon;

  const auto potential_ineq =
      curvmax::check_potential_inequality(run.lifted, decomp, *inst.matroid, params);
  const auto guarantee =
      curvmax::check_local_max_guarantee(run, decomp, *inst.matroid, params, run.theta);
  const auto decomposition = curvmax::check_decomposition(*inst.f, decomp);
  const auto ratio = curvmax::check_ratio(inst.f, *inst.matroid, flags.epsilon, cfg);

  json j = curvmax::report_to_json(run);
  if (flags.stable_output) j["wall_time_ms"] = 0.0;
  j["opt_value"] = ratio.opt_value;
  j["ratio"] = ratio.ratio;
  json checks;
  checks["potential_inequality"] = curvmax::inequality_check_to_json(potential_ineq);
  checks["local_max_guarantee"] = curvmax::inequality_check_to_json(guarantee);
  checks["decomposition"] = curvmax::decomposition_check_to_json(decomposition);
  checks["ratio"] = curvmax::ratio_check_to_json(ratio);
  j["checks"] = checks;
  const bool all_pass = potential_ineq.pass &&
                        (guarantee.pass || guarantee.skipped.has_value()) &&
                        decomposition.pass() && ratio.pass;
  j["all_pass"] = all_pass;
  emit(j, flags.output);
  return all_pass ? 0 : kExitCheckFailure;
}

struct BenchRow {
  std::string instance;
  std::string algorithm;
  std::string status = "ok";
  int n = 0;
  int rank = 0;
  double kappa = 0.0;
  double value = 0.0;
  double opt_value = 0.0;
  double ratio = 0.0;
  std::int64_t iterations = 0;
  std::uint64_t oracle_calls = 0;
  double time_ms = 0.0;
};

std::string csv_line(const BenchRow& r) {
  std::string line = r.instance + "," + r.algorithm + "," + r.status + "," + std::to_string(r.n) +
                     "," + std::to_string(r.rank) + "," + format17(r.kappa) + "," +
                     format17(r.value) + "," + format17(r.opt_value) + "," + format17(r.ratio) +
                     "," + std::to_string(r.iterations) + "," + std::to_string(r.oracle_calls) +
                     "," + format17(r.time_ms);
  return line;
}

int cmd_bench(const std::string& dir, double epsilon, const std::string& csv_path, int threads,
              bool stable_output) {
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw curvmax::InputError("no .json instances in " + dir);

  std::vector<std::string> lines;
  lines.push_back(
      "instance,algorithm,status,n,rank,kappa,value,opt_value,ratio,iterations,oracle_calls,"
      "time_ms");
  for (const fs::path& path : paths) {
    const std::string name = path.stem().string();
    try {
      // Every algorithm runs on a fresh oracle so its oracle_calls column
      // reflects the distinct evaluations it needed itself.
      const curvmax::Instance meta = curvmax::load_instance(path);
      BenchRow base;
      base.instance = name;
      base.n = meta.f->ground_size();
      base.rank = meta.matroid->rank();
      base.kappa = curvmax::curvature(*meta.f);

      const auto opt = curvmax::brute_force_opt(*meta.f, *meta.matroid);
      base.opt_value = opt.opt_value;
      auto ratio_vs_opt = [&opt](double v) { return opt.opt_value > 0 ? v / opt.opt_value : 1.0; };
      auto timed = [&stable_output](auto&& fn) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        return stable_output ? 0.0
                             : std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - start)
                                   .count();
      };

      {
        BenchRow row = base;
        row.algorithm = "greedy";
        const curvmax::Instance inst = curvmax::load_instance(path);
        curvmax::ElementSet s;
        row.time_ms = timed([&] { s = curvmax::greedy(*inst.f, *inst.matroid); });
        row.value = inst.f->eval(s);
        row.iterations = s.size();
        row.oracle_calls = inst.f->eval_count();
        row.ratio = ratio_vs_opt(row.value);
        lines.push_back(csv_line(row));
      }
      {
        BenchRow row = base;
        row.algorithm = "oblivious_ls";
        const curvmax::Instance inst = curvmax::load_instance(path);
        curvmax::ElementSet s;
        std::int64_t moves = 0;
        row.time_ms =
            timed([&] { s = curvmax::oblivious_local_search(*inst.f, *inst.matroid, &moves); });
        row.value = inst.f->eval(s);
        row.iterations = moves;
        row.oracle_calls = inst.f->eval_count();
        row.ratio = ratio_vs_opt(row.value);
        lines.push_back(csv_line(row));
      }
      {
        BenchRow row = base;
        row.algorithm = "non_oblivious_ls";
        const curvmax::Instance inst = curvmax::load_instance(path);
        curvmax::SearchConfig cfg;
        cfg.threads = threads;
        curvmax::RunReport report;
        row.time_ms = timed(
            [&] { report = curvmax::solve_with_curvature(inst.f, *inst.matroid, epsilon, cfg); });
        row.value = report.f_value;
        row.iterations = report.iterations;
        row.oracle_calls = report.oracle_calls;
        row.ratio = ratio_vs_opt(row.value);
        lines.push_back(csv_line(row));
      }
      {
        BenchRow row = base;
        row.algorithm = "brute_force";
        const curvmax::Instance inst = curvmax::load_instance(path);
        curvmax::BruteForceResult fresh;
        row.time_ms = timed([&] { fresh = curvmax::brute_force_opt(*inst.f, *inst.matroid); });
        row.value = fresh.opt_value;
        row.ratio = 1.0;
        row.iterations = static_cast<std::int64_t>(fresh.enumerated);
        row.oracle_calls = inst.f->eval_count();
        lines.push_back(csv_line(row));
      }
    } catch (const std::exception& e) {
      BenchRow row;
      row.instance = name;
      row.algorithm = "all";
      row.status = std::string("error: ") + e.what();
      std::replace(row.status.begin(), row.status.end(), ',', ';');
      lines.push_back(csv_line(row));
    }
  }

  std::string text;
  for (const std::string& line : lines) text += line + "\n";
  if (csv_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(csv_path);
    if (!out) throw curvmax::InputError("cannot write CSV file: " + csv_path);
    out << text;
  }
  return 0;
}

int cmd_gen_corpus(const std::string& dir) {
  fs::create_directories(dir);
  for (const curvmax::NamedInstance& inst : curvmax::builtin_corpus()) {
    const fs::path path = fs::path(dir) / (inst.name + ".json");
    std::ofstream out(path);
    if (!out) throw curvmax::InputError("cannot write " + path.string());
    out << inst.spec.dump(2) << "\n";
  }
  std::cout << "wrote " << curvmax::builtin_corpus().size() << " instances to " << dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature-aware submodular maximization under a matroid constraint"};
  app.require_subcommand(1);

  SolveFlags flags;
  std::string instance_path;
  std::string bench_dir;
  std::string csv_path;
  std::string corpus_dir;
  bool no_validate = false;

  CLI::App* solve = app.add_subcommand("solve", "run the non-oblivious local search solver");
  solve->add_option("instance", instance_path, "instance JSON file")->required();
  solve->add_option("--epsilon", flags.epsilon, "target approximation slack in (0,1)");
  solve->add_option("--ell", flags.ell, "override the number of lifted copies");
  solve->add_option("--gamma", flags.gamma, "submodularity ratio, a number or 'auto'");
  solve->add_option("--gamma-min", flags.gamma_min, "smallest gamma tried by 'auto'");
  solve->add_option("--eta", flags.eta, "geometric step of the gamma grid");
  solve->add_flag("--trace", flags.trace, "record accepted swaps in the report");
  solve->add_flag("--validate", flags.validate, "validate table functions before solving");
  solve->add_flag("--stable-output", flags.stable_output, "zero out wall-clock fields");
  solve->add_option("--threads", flags.threads, "candidate-scan threads (0 = hardware)");
  solve->add_option("--output", flags.output, "write the JSON report here instead of stdout");

  CLI::App* opt = app.add_subcommand("opt", "brute-force optimum (n <= 20)");
  opt->add_option("instance", instance_path, "instance JSON file")->required();
  opt->add_option("--output", flags.output, "write the JSON report here instead of stdout");
  opt->add_flag("--stable-output", flags.stable_output, "zero out wall-clock fields");

  CLI::App* verify = app.add_subcommand("verify", "solve and check the paper's inequalities");
  verify->add_option("instance", instance_path, "instance JSON file")->required();
  verify->add_option("--epsilon", flags.epsilon, "target approximation slack in (0,1)");
  verify->add_option("--ell", flags.ell, "override the number of lifted copies");
  verify->add_flag("--no-validate", no_validate, "skip table validation");
  verify->add_flag("--stable-output", flags.stable_output, "zero out wall-clock fields");
  verify->add_option("--threads", flags.threads, "candidate-scan threads (0 = hardware)");
  verify->add_option("--output", flags.output, "write the JSON report here instead of stdout");

  CLI::App* bench = app.add_subcommand("bench", "compare algorithms over a directory of instances");
  bench->add_option("instances", bench_dir, "directory of instance JSON files")->required();
  bench->add_option("--epsilon", flags.epsilon, "target approximation slack in (0,1)");
  bench->add_option("--csv", csv_path, "write CSV here instead of stdout");
  bench->add_option("--threads", flags.threads, "candidate-scan threads (0 = hardware)");
  bench->add_flag("--stable-output", flags.stable_output, "zero out wall-clock fields");

  CLI::App* gen = app.add_subcommand("gen-corpus", "write the built-in instance corpus");
  gen->add_option("dir", corpus_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(instance_path, flags);
    if (opt->parsed()) return cmd_opt(instance_path, flags.output, flags.stable_output);
    if (verify->parsed()) return cmd_verify(instance_path, flags, no_validate);
    if (bench->parsed()) {
      return cmd_bench(bench_dir, flags.epsilon, csv_path, flags.threads, flags.stable_output);
    }
    if (gen->parsed()) return cmd_gen_corpus(corpus_dir);
  } catch (const curvmax::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitResourceError;
  } catch (const curvmax::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return 0;
}
