#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "curvmax/search.hpp"
#include "curvmax/verify.hpp"
#include "test_support.hpp"

using namespace curvmax;

namespace {

std::shared_ptr<const SetFunction> modular123() {
  return std::make_shared<SetFunction>(SetFunction::modular({1, 2, 3}));
}

// The instance where the oblivious baseline stalls: elements 0,1 cover four
// private items; elements 2,3 cover the same items plus one extra each.
std::shared_ptr<const SetFunction> stall_coverage() {
  return std::make_shared<SetFunction>(
      SetFunction::coverage({1, 1, 1, 1, 1, 1}, {{0, 1}, {2, 3}, {0, 2, 4}, {1, 3, 5}}));
}

}  // namespace

TEST_CASE("greedy picks max marginals with smallest-id ties") {
  const auto f = modular123();
  CHECK(greedy(*f, Matroid::uniform(3, 1)) == ElementSet::of({2}));
  CHECK(greedy(*f, Matroid::uniform(3, 2)) == ElementSet::of({1, 2}));

  const SetFunction tied = testsupport::table_k05();
  CHECK(greedy(tied, Matroid::uniform(2, 1)) == ElementSet::of({0}));
}

TEST_CASE("greedy completes a base even under a flat function") {
  const SetFunction zero = SetFunction::modular({0, 0, 0});
  CHECK(greedy(zero, Matroid::uniform(3, 2)) == ElementSet::of({0, 1}));
}

TEST_CASE("local search on a rank-1 modular instance finds the optimum") {
  const auto f = modular123();
  const Matroid m = Matroid::uniform(3, 1);
  for (int ell : {1, 2, 4}) {
    RunReport report = solve_with_curvature(f, m, 0.1, {.ell = ell});
    CHECK(report.solution == ElementSet::of({2}));
    CHECK(report.f_value == 3.0);
    CHECK(report.converged);
  }
}

TEST_CASE("local search on the duplicate-coverage instance reaches OPT") {
  auto f = std::make_shared<SetFunction>(testsupport::table_k10());
  RunReport report = solve_with_curvature(f, Matroid::uniform(2, 1), 0.1, {.ell = 4});
  CHECK(report.f_value == Catch::Approx(1.0).margin(1e-12));
  CHECK(*report.kappa == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("solve_with_curvature on modular instances equals greedy and OPT") {
  const auto f = modular123();
  const Matroid m = Matroid::uniform(3, 2);
  RunReport report = solve_with_curvature(f, m, 0.1);
  CHECK(*report.kappa == 0.0);
  CHECK(report.solution == greedy(*f, m));
  CHECK(report.f_value == brute_force_opt(*f, m).opt_value);
  CHECK(report.guarantee == Catch::Approx(0.9).margin(1e-12));
  CHECK(report.ell == 4);
}

TEST_CASE("solve_with_curvature meets the curvature bound on the spec table") {
  auto f = std::make_shared<SetFunction>(testsupport::table_k05());
  RunReport report = solve_with_curvature(f, Matroid::uniform(2, 1), 0.1);
  CHECK(report.ell == 4);
  CHECK(*report.kappa == Catch::Approx(0.5).margin(1e-12));
  CHECK(report.f_value == Catch::Approx(1.0).margin(1e-12));
  const double bound = 1.0 - 0.5 / std::exp(1.0) - 0.1;
  CHECK(report.guarantee == Catch::Approx(bound).margin(1e-12));
  CHECK(report.f_value >= bound * 1.0 - 1e-9);
}

TEST_CASE("solve_with_curvature on a coverage/partition instance beats the bound") {
  auto f = std::make_shared<SetFunction>(SetFunction::coverage(
      {2, 1, 3, 1, 2, 2, 1}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}}));
  const Matroid m = Matroid::partition(6, {{0, 1, 2}, {3, 4, 5}}, {1, 2});
  RunReport report = solve_with_curvature(f, m, 0.1);
  const auto opt = brute_force_opt(*f, m);
  CHECK(report.f_value >= report.guarantee * opt.opt_value - 1e-9);
  CHECK(report.converged);
  CHECK(static_cast<std::uint64_t>(report.iterations) < report.oracle_calls);
}

TEST_CASE("trace shows strictly increasing potential and theta-sized gains") {
  const auto f = stall_coverage();
  const Matroid m = Matroid::uniform(4, 2);
  SearchConfig cfg;
  cfg.record_trace = true;
  RunReport report = solve_with_curvature(f, m, 0.1, cfg);
  double last_phi = -1.0;
  for (const TraceEntry& entry : report.trace) {
    CHECK(entry.delta > report.theta);
    CHECK(entry.phi_after > last_phi);
    last_phi = entry.phi_after;
  }
  CHECK(report.iterations == static_cast<std::int64_t>(report.trace.size()));
  CHECK(report.iterations < 1000);
}

TEST_CASE("every returned solution is a colorful base and locally maximal") {
  for (const auto& [name, f] : testsupport::sample_submodular_oracles()) {
    if (f->ground_size() > 8) continue;
    INFO(name);
    const Matroid m = Matroid::uniform(f->ground_size(), 2);
    const double kappa = curvature(*f);
    const Decomposition d = decompose(f, kappa);
    const auto params = PotentialParams::make(3, 1.0);
    SearchConfig cfg;
    cfg.epsilon = 0.1;
    RunReport report = local_search(d, m, params, cfg);

    CHECK(m.is_base(report.lifted.support()));
    CHECK(report.converged);
    // Post-hoc local maximality: no feasible swap improves by more than theta.
    for (const auto& swap : detail::feasible_swaps(report.lifted, m, params.ell)) {
      CHECK(swap_delta(report.lifted, swap.out, swap.in, d, params) <= report.theta + 1e-12);
    }
  }
}

TEST_CASE("identical runs produce identical traces") {
  const Matroid m = Matroid::uniform(4, 2);
  SearchConfig cfg;
  cfg.record_trace = true;

  // Fresh oracles per run: a shared oracle would serve the second run entirely
  // from its memo and report zero new evaluations.
  RunReport a = solve_with_curvature(stall_coverage(), m, 0.1, cfg);
  RunReport b = solve_with_curvature(stall_coverage(), m, 0.1, cfg);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].out == b.trace[i].out);
    CHECK(a.trace[i].in == b.trace[i].in);
    CHECK(a.trace[i].delta == b.trace[i].delta);
  }
  CHECK(a.solution == b.solution);
  CHECK(a.f_value == b.f_value);
  CHECK(a.oracle_calls == b.oracle_calls);
}

TEST_CASE("parallel candidate scanning matches the sequential run") {
  auto fresh_oracle = [] {
    std::mt19937 rng(3);
    return std::make_shared<SetFunction>(testsupport::random_coverage(rng, 8, 10));
  };
  const Matroid m = Matroid::partition(8, {{0, 1, 2, 3}, {4, 5, 6, 7}}, {2, 2});

  SearchConfig seq;
  seq.record_trace = true;
  seq.threads = 1;
  SearchConfig par = seq;
  par.threads = 4;

  RunReport a = solve_with_curvature(fresh_oracle(), m, 0.1, seq);
  RunReport b = solve_with_curvature(fresh_oracle(), m, 0.1, par);
  CHECK(a.solution == b.solution);
  CHECK(a.f_value == b.f_value);
  CHECK(a.iterations == b.iterations);
  CHECK(a.oracle_calls == b.oracle_calls);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].out == b.trace[i].out);
    CHECK(a.trace[i].in == b.trace[i].in);
  }
}

TEST_CASE("guided search escapes the greedy trap") {
  auto f = std::make_shared<SetFunction>(
      SetFunction::coverage({1.0, 0.9}, {{0}, {1}, {0}}));
  const Matroid m = Matroid::partition(3, {{0, 1}, {2}}, {1, 1});

  const ElementSet greedy_set = greedy(*f, m);
  CHECK(greedy_set == ElementSet::of({0, 2}));
  CHECK(f->eval(greedy_set) == 1.0);

  RunReport report = solve_with_curvature(f, m, 0.1);
  CHECK(report.f_value == Catch::Approx(1.9).margin(1e-12));
  CHECK(report.f_value == brute_force_opt(*f, m).opt_value);
  CHECK(report.iterations >= 1);
}

TEST_CASE("rank-0 matroids short-circuit") {
  const auto f = modular123();
  RunReport report = solve_with_curvature(f, Matroid::uniform(3, 0), 0.1);
  CHECK(report.solution.empty());
  CHECK(report.f_value == 0.0);
  CHECK(report.iterations == 0);
  CHECK(report.converged);
}

TEST_CASE("gamma grid construction") {
  const auto grid = gamma_grid(0.2, 0.5);
  REQUIRE(grid.size() == 3);
  CHECK(grid[0] == 1.0);
  CHECK(grid[1] == 0.5);
  CHECK(grid[2] == 0.25);
  CHECK_THROWS_AS(gamma_grid(1.5, 0.5), InputError);
}

TEST_CASE("gamma guessing with submodular g matches the curvature pipeline") {
  auto f = std::make_shared<SetFunction>(testsupport::table_k05());
  const Matroid m = Matroid::uniform(2, 1);
  // l = 0 keeps g = f, which is submodular, so gamma = 1 should win ties.
  RunReport guessed = gamma_guessing_solve(f, {0.0, 0.0}, m, 0.1, 0.2, 0.5);
  RunReport direct = solve_with_curvature(f, m, 0.1);
  CHECK(guessed.solution == direct.solution);
  CHECK(guessed.f_value == direct.f_value);
  CHECK(guessed.gamma == 1.0);
}

TEST_CASE("gamma guessing handles a non-submodular g") {
  // gamma_g = 2/3 for this table; the 0.5 grid point under-guesses validly.
  auto f = std::make_shared<SetFunction>(SetFunction::table(2, {0, 1, 1, 2.5}));
  const Matroid m = Matroid::uniform(2, 2);
  RunReport report = gamma_guessing_solve(f, {0.0, 0.0}, m, 0.1, 0.2, 0.5);
  CHECK(report.f_value == Catch::Approx(2.5).margin(1e-12));
  CHECK(report.f_value == brute_force_opt(*f, m).opt_value);
  CHECK_FALSE(report.kappa.has_value());
}

TEST_CASE("oblivious baseline") {
  SECTION("modular objectives end at the optimal base") {
    const auto f = modular123();
    const Matroid m = Matroid::uniform(3, 2);
    CHECK(oblivious_local_search(*f, m) == ElementSet::of({1, 2}));
  }
  SECTION("rank-1 instances end at the argmax singleton") {
    const auto f = modular123();
    CHECK(oblivious_local_search(*f, Matroid::uniform(3, 1)) == ElementSet::of({2}));
  }
  SECTION("stalls where the guided search does not") {
    const auto f = stall_coverage();
    const Matroid m = Matroid::uniform(4, 2);
    std::int64_t moves = 0;
    const ElementSet oblivious = oblivious_local_search(*f, m, &moves);
    CHECK(f->eval(oblivious) == 4.0);  // stuck at the first base {0,1}
    CHECK(moves == 0);
    RunReport guided = solve_with_curvature(f, m, 0.1);
    CHECK(guided.f_value == 6.0);
    CHECK(guided.f_value >= f->eval(oblivious));
  }
}
