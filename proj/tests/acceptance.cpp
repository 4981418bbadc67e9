// Acceptance suite: runs every shipping criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exits 1 if any criterion fails.
//
// Usage: acceptance <corpus_dir> <cli_binary>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "curvmax/curvmax.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace curvmax;

namespace {

struct CorpusRun {
  std::string name;
  Instance instance;
  double kappa = 0.0;
  Decomposition decomposition;
  PotentialParams params;
  RunReport report;
  BruteForceResult opt;
};

struct Failure {
  std::string what;
};

std::vector<Failure> g_failures;

void expect(bool ok, const std::string& what) {
  if (!ok) g_failures.push_back({what});
}

bool criterion(int number, const std::string& title, const std::function<std::string()>& body) {
  g_failures.clear();
  std::string detail;
  try {
    detail = body();
  } catch (const std::exception& e) {
    g_failures.push_back({std::string("exception: ") + e.what()});
  }
  const bool pass = g_failures.empty();
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << number << ". " << title;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  for (std::size_t i = 0; i < g_failures.size() && i < 5; ++i) {
    std::cout << "       - " << g_failures[i].what << "\n";
  }
  if (g_failures.size() > 5) {
    std::cout << "       - ... " << g_failures.size() - 5 << " more\n";
  }
  return pass;
}

std::vector<fs::path> corpus_paths(const fs::path& dir) {
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  return paths;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& cli, const std::string& args) {
  const std::string command = cli + " " + args + " 2>/dev/null";
  CliResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    result.out.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

void require_valid_bijection(const Matroid& m, ElementSet a, ElementSet b,
                             const ExchangeBijection& h, const std::string& context) {
  ElementSet image;
  for (int u : a.members()) {
    const int v = h(u);
    expect(b.contains(v), context + ": image outside B");
    expect(!image.contains(v), context + ": not injective");
    image = image.with(v);
    if (b.contains(u)) expect(v == u, context + ": not identity on intersection");
    expect(m.is_independent(a.without(u).with(v)), context + ": swap not independent");
  }
  expect(image == b, context + ": not onto B");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <corpus_dir> <cli_binary>\n";
    return 2;
  }
  const fs::path corpus_dir = argv[1];
  const std::string cli = argv[2];

  std::vector<CorpusRun> runs;
  bool all_pass = true;

  // ------------------------------------------------------------------ 1
  all_pass &= criterion(1, "ratio guarantee f >= (1 - kappa/e - 0.1) * OPT on the corpus", [&] {
    const auto start = std::chrono::steady_clock::now();
    const auto paths = corpus_paths(corpus_dir);
    expect(paths.size() >= 30, "corpus must hold at least 30 instances, found " +
                                   std::to_string(paths.size()));
    for (const fs::path& path : paths) {
      Instance inst = load_instance(path);
      const std::string name = path.stem().string();
      expect(inst.f->ground_size() <= 10, name + ": n must stay <= 10");

      const double epsilon = 0.1;
      RunReport report = solve_with_curvature(inst.f, *inst.matroid, epsilon);
      expect(report.ell == 4, name + ": epsilon 0.1 must select ell = 4");
      expect(report.converged, name + ": hit the iteration cap before local maximality");
      const double kappa = *report.kappa;
      const BruteForceResult opt = brute_force_opt(*inst.f, *inst.matroid);

      const double bound = 1.0 - kappa / std::exp(1.0) - epsilon;
      const double tol = 1e-9 * std::max(1.0, inst.f->scale());
      expect(report.f_value >= bound * opt.opt_value - tol,
             name + ": value " + std::to_string(report.f_value) + " below bound " +
                 std::to_string(bound * opt.opt_value));

      const Decomposition d = decompose(inst.f, kappa);
      const auto params = PotentialParams::make(report.ell, 1.0);
      runs.push_back({name, std::move(inst), kappa, d, params, std::move(report), opt});
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    expect(seconds < 60.0, "corpus sweep exceeded 60 seconds");
    std::ostringstream detail;
    detail << runs.size() << " instances in " << seconds << "s";
    return detail.str();
  });

  // ------------------------------------------------------------------ 2
  all_pass &= criterion(2, "potential exchange inequality at local maxima and enumerated colorful bases", [&] {
    int checked = 0;
    for (const CorpusRun& run : runs) {
      const InequalityCheckReport report =
          check_potential_inequality(run.report.lifted, run.decomposition, *run.instance.matroid, run.params);
      expect(report.pass, run.name + ": potential inequality fails at the returned local maximum");
      ++checked;
    }
    int enumerated = 0;
    for (const CorpusRun& run : runs) {
      if (run.instance.f->ground_size() > 6 || enumerated >= 240) continue;
      const Matroid& m = *run.instance.matroid;
      const auto bases = testsupport::all_bases(m);
      for (int ell = 1; ell <= 4 && enumerated < 240; ++ell) {
        const auto params = PotentialParams::make(ell, 1.0);
        int bases_used = 0;
        for (ElementSet base : bases) {
          if (++bases_used > 6) break;
          int lifts_used = 0;
          for (const LiftedSolution& s : testsupport::all_colorful_lifts(base, ell)) {
            if (++lifts_used > 4 || enumerated >= 240) break;
            const InequalityCheckReport report = check_potential_inequality(s, run.decomposition, m, params);
            expect(report.pass, run.name + ": potential inequality fails at an enumerated base, ell=" +
                                    std::to_string(ell));
            ++enumerated;
          }
        }
      }
    }
    expect(enumerated >= 200, "needed >= 200 enumerated bases, got " + std::to_string(enumerated));
    return std::to_string(checked) + " local maxima + " + std::to_string(enumerated) +
           " enumerated bases";
  });

  // ------------------------------------------------------------------ 3
  all_pass &= criterion(3, "local-maximum guarantee with r*theta slack on every solver run", [&] {
    for (const CorpusRun& run : runs) {
      const InequalityCheckReport report = check_local_max_guarantee(run.report, run.decomposition,
                                                   *run.instance.matroid, run.params,
                                                   run.report.theta);
      expect(report.pass, run.name + ": guarantee inequality fails (lhs " + std::to_string(report.lhs) +
                              " rhs " + std::to_string(report.rhs) + ")");
    }
    return std::to_string(runs.size()) + " runs";
  });

  // ------------------------------------------------------------------ 4
  all_pass &= criterion(4, "decomposition suite: g+l=f, g monotone submodular, g <= kappa*f", [&] {
    for (const CorpusRun& run : runs) {
      const DecompositionCheckReport report =
          check_decomposition(*run.instance.f, run.decomposition);
      expect(report.pass(), run.name + ": " + (report.violations.empty()
                                                   ? std::string("decomposition check failed")
                                                   : report.violations.front()));
    }
    return std::to_string(runs.size()) + " instances, exhaustive subsets";
  });

  // ------------------------------------------------------------------ 5
  all_pass &= criterion(5, "potential: swap deltas match recomputation; alpha recurrence", [&] {
    std::mt19937 rng(20240817);
    long long sampled = 0;
    while (sampled < 10000) {
      const int n = 4 + static_cast<int>(rng() % 3);
      auto f = std::make_shared<SetFunction>(testsupport::random_coverage(rng, n, n + 2));
      const Decomposition d = decompose(f, curvature(*f));
      const int ell = 1 + static_cast<int>(rng() % 4);
      const auto params = PotentialParams::make(ell, 1.0);

      LiftedSolution s(ell);
      for (int e = 0; e < n; ++e) {
        if (rng() % 2 == 1) s.add({e, 1 + static_cast<int>(rng() % ell)});
      }
      if (s.empty()) s.add({0, 1});

      const double phi_before = phi_f(s, d, params).phi_f();
      for (const LiftedElement out : s.pairs()) {
        for (int v = 0; v < n; ++v) {
          if (s.support().contains(v) && v != out.element) continue;
          for (int j = 1; j <= ell; ++j) {
            const LiftedElement in{v, j};
            if (in == out) continue;
            LiftedSolution swapped = s;
            swapped.remove(out);
            swapped.add(in);
            const double expected = phi_f(swapped, d, params).phi_f() - phi_before;
            const double actual = swap_delta(s, out, in, d, params);
            if (std::abs(actual - expected) > 1e-9 * std::max(1.0, std::abs(phi_before))) {
              expect(false, "swap delta mismatch at sample " + std::to_string(sampled));
            }
            ++sampled;
          }
        }
      }
    }
    for (double gamma : {0.25, 0.5, 0.75, 1.0}) {
      for (int ell = 1; ell <= 16; ++ell) {
        const auto alphas = alpha_coefficients(ell, gamma);
        const double growth = 1.0 + gamma * gamma * gamma / ell;
        for (int i = 1; i < ell; ++i) {
          const double lhs = alphas[static_cast<std::size_t>(i)] * (ell - i);
          const double rhs = growth * i * alphas[static_cast<std::size_t>(i - 1)];
          if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(rhs))) {
            expect(false, "alpha recurrence violated at ell=" + std::to_string(ell) +
                              " i=" + std::to_string(i) + " gamma=" + std::to_string(gamma));
          }
        }
      }
    }
    return std::to_string(sampled) + " swap samples; alpha grid ell<=16";
  });

  // ------------------------------------------------------------------ 6
  all_pass &= criterion(6, "closed-form spot values", [&] {
    expect(guarantee_factor(1, 1.0) == 0.5, "guarantee_factor(1,1) must equal 0.5 exactly");
    expect(std::abs(guarantee_factor(4, 1.0) - 0.5904) <= 1e-9,
           "guarantee_factor(4,1) must equal 0.5904 within 1e-9");
    expect(smallest_ell(0.1, 1.0) == 4, "smallest_ell(0.1, 1) must equal 4");
    return std::string();
  });

  // ------------------------------------------------------------------ 7
  all_pass &= criterion(7, "matroid machinery: axioms, 100 bijections per kind, lifted axioms", [&] {
    struct KindCase {
      std::string name;
      Matroid m;
    };
    const std::vector<KindCase> kinds = {
        {"uniform", Matroid::uniform(8, 3)},
        {"partition", Matroid::partition(8, {{0, 1, 2}, {3, 4}, {5, 6, 7}}, {2, 1, 2})},
        {"graphic", Matroid::graphic(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 2}, {1, 3}, {2, 4},
                                         {0, 4}})},
        {"explicit_bases", [] {
           std::vector<ElementSet> bases;
           for (int a = 0; a < 6; ++a) {
             for (int b = a + 1; b < 6; ++b) bases.push_back(ElementSet::of({a, b}));
           }
           return Matroid::explicit_bases(6, bases);
         }()},
    };
    for (const auto& [name, m] : kinds) {
      auto indep = [&m = m](ElementSet s) { return m.is_independent(s); };
      expect(!hereditary_violation(indep, m.ground_size()), name + ": hereditary axiom");
      expect(!exchange_violation(indep, m.ground_size()), name + ": exchange axiom");

      const auto bases = testsupport::all_bases(m);
      std::mt19937 rng(7);
      std::uniform_int_distribution<std::size_t> pick(0, bases.size() - 1);
      for (int trial = 0; trial < 100; ++trial) {
        const ElementSet a = bases[pick(rng)];
        const ElementSet b = bases[pick(rng)];
        require_valid_bijection(m, a, b, exchange_bijection(m, a, b), name);
      }
    }
    const std::vector<KindCase> lifted_kinds = {
        {"uniform", Matroid::uniform(4, 2)},
        {"partition", Matroid::partition(4, {{0, 1}, {2, 3}}, {1, 1})},
        {"graphic", Matroid::graphic(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}})},
        {"explicit_bases", [] {
           std::vector<ElementSet> bases;
           for (int a = 0; a < 4; ++a) {
             for (int b = a + 1; b < 4; ++b) bases.push_back(ElementSet::of({a, b}));
           }
           return Matroid::explicit_bases(4, bases);
         }()},
    };
    for (const auto& [name, m] : lifted_kinds) {
      for (int ell = 1; ell <= 3; ++ell) {
        const int n = m.ground_size();
        auto lifted_indep = [&m = m, n, ell](ElementSet mask) {
          std::vector<LiftedElement> pairs;
          for (int bit : mask.members()) pairs.push_back({bit % n, bit / n + 1});
          return lifted_is_independent(m, ell, pairs);
        };
        expect(!hereditary_violation(lifted_indep, n * ell),
               name + ": lifted hereditary axiom, ell=" + std::to_string(ell));
        expect(!exchange_violation(lifted_indep, n * ell),
               name + ": lifted exchange axiom, ell=" + std::to_string(ell));
      }
    }
    return std::string("4 kinds x (axioms + 100 bijections); lifted axioms ell<=3");
  });

  // ------------------------------------------------------------------ 8
  all_pass &= criterion(8, "determinism: byte-identical solve and bench reports (parallel scan)", [&] {
    const auto paths = corpus_paths(corpus_dir);
    for (const fs::path& path : paths) {
      const std::string args =
          "solve " + path.string() + " --epsilon 0.1 --threads 4 --stable-output";
      const CliResult a = run_cli(cli, args);
      const CliResult b = run_cli(cli, args);
      expect(a.exit_code == 0 && b.exit_code == 0, path.stem().string() + ": solve failed");
      expect(a.out == b.out, path.stem().string() + ": solve reports differ between runs");
    }
    const std::string bench_args =
        "bench " + corpus_dir.string() + " --epsilon 0.1 --threads 4 --stable-output";
    const CliResult a = run_cli(cli, bench_args);
    const CliResult b = run_cli(cli, bench_args);
    expect(a.exit_code == 0 && b.exit_code == 0, "bench failed");
    expect(!a.out.empty() && a.out == b.out, "bench outputs differ between runs");
    return std::to_string(paths.size()) + " solve pairs + bench pair";
  });

  // ------------------------------------------------------------------ 9
  all_pass &= criterion(9, "baselines: greedy >= 1/(1+kappa), oblivious never above OPT", [&] {
    for (const CorpusRun& run : runs) {
      const SetFunction& f = *run.instance.f;
      const Matroid& m = *run.instance.matroid;
      const double tol = 1e-9 * std::max(1.0, f.scale());

      const double greedy_value = f.eval(greedy(f, m));
      expect(greedy_value >= run.opt.opt_value / (1.0 + run.kappa) - tol,
             run.name + ": greedy below the 1/(1+kappa) bound");

      const double oblivious_value = f.eval(oblivious_local_search(f, m));
      expect(oblivious_value <= run.opt.opt_value + tol,
             run.name + ": oblivious exceeded the brute-force optimum");
    }
    return std::to_string(runs.size()) + " instances";
  });

  std::cout << (all_pass ? "acceptance: ALL CRITERIA PASS\n" : "acceptance: FAILURES PRESENT\n");
  return all_pass ? 0 : 1;
}
