#pragma once

#include <bit>
#include <cmath>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "curvmax/element_set.hpp"
#include "curvmax/errors.hpp"
#include "curvmax/lifted.hpp"
#include "curvmax/set_function.hpp"

namespace curvmax {

// Default cap on the number of colors; each potential evaluation sums 2^ell
// terms, so 16 keeps a single evaluation near 10^5 oracle calls.
inline int default_ell_cap() {
  if (const char* env = std::getenv("CURVMAX_ELL_CAP")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap <= 24) return cap;
    throw InputError("CURVMAX_ELL_CAP must be an integer in [1,24], got '" + std::string(env) + "'");
  }
  return 16;
}

// alpha_i = (1 + gamma^3/ell)^(i-1) / binom(ell-1, i-1) for i = 1..ell.
inline std::vector<double> alpha_coefficients(int ell, double gamma) {
  if (ell < 1) throw InputError("alpha_coefficients: ell must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw InputError("alpha_coefficients: gamma must lie in (0,1]");
  }
  const double growth = 1.0 + gamma * gamma * gamma / ell;
  std::vector<double> alphas(static_cast<std::size_t>(ell));
  double power = 1.0;   // growth^(i-1)
  double binom = 1.0;   // binom(ell-1, i-1)
  for (int i = 1; i <= ell; ++i) {
    alphas[static_cast<std::size_t>(i - 1)] = power / binom;
    power *= growth;
    binom = binom * (ell - i) / i;  // C(ell-1,i) from C(ell-1,i-1)
  }
  return alphas;
}

// 1 - (1 + gamma^3/ell)^(-ell); increasing in ell with limit 1 - exp(-gamma^3).
inline double guarantee_factor(int ell, double gamma) {
  if (ell < 1) throw InputError("guarantee_factor: ell must be >= 1");
  const double growth = 1.0 + gamma * gamma * gamma / ell;
  return 1.0 - std::pow(growth, -ell);
}

// Smallest ell whose finite-copy loss keeps the factor within epsilon/2 of its
// limit 1 - exp(-gamma^3).
inline int smallest_ell(double epsilon, double gamma, int cap = default_ell_cap()) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("smallest_ell: epsilon must lie in (0,1)");
  if (cap < 1) throw InputError("smallest_ell: cap must be >= 1");
  const double target = 1.0 - std::exp(-gamma * gamma * gamma) - epsilon / 2.0;
  for (int ell = 1; ell <= cap; ++ell) {
    if (guarantee_factor(ell, gamma) >= target) return ell;
  }
  throw ResourceError("smallest_ell: no ell <= " + std::to_string(cap) +
                      " reaches factor " + std::to_string(target) +
                      "; increase epsilon or raise CURVMAX_ELL_CAP");
}

// Everything the potential needs: the color count, the (guessed) submodularity
// ratio of g, the alpha ladder and the fixed normalization in front of the sum.
struct PotentialParams {
  int ell;
  double gamma;
  std::vector<double> alphas;
  double prefactor;  // (gamma/ell) * (1 + gamma^3/ell)^(-ell)

  static PotentialParams make(int ell, double gamma, int cap = default_ell_cap()) {
    if (ell > cap) {
      throw ResourceError("PotentialParams: ell = " + std::to_string(ell) + " above cap " +
                          std::to_string(cap) + " (2^ell summation)");
    }
    PotentialParams p;
    p.ell = ell;
    p.gamma = gamma;
    p.alphas = alpha_coefficients(ell, gamma);
    p.prefactor = gamma / ell * std::pow(1.0 + gamma * gamma * gamma / ell, -ell);
    return p;
  }
};

// Phi_g(S) = prefactor * sum over nonempty J of alpha_|J| * g(pi_J(S)).
// Defined for arbitrary subsets of E x [ell]; the empty J contributes nothing
// because g is normalized.
template <class G>
double phi_g(std::span<const ElementSet> by_color, G&& g, const PotentialParams& params) {
  const ColorMask limit = ColorMask{1} << params.ell;
  double sum = 0.0;
  for (ColorMask j = 1; j < limit; ++j) {
    sum += params.alphas[static_cast<std::size_t>(std::popcount(j) - 1)] * g(project(by_color, j));
  }
  return params.prefactor * sum;
}

template <class G>
double phi_g(const LiftedSolution& s, G&& g, const PotentialParams& params) {
  return phi_g(s.by_color(), std::forward<G>(g), params);
}

struct PotentialValue {
  double phi_g = 0.0;
  double linear_part = 0.0;
  double phi_f() const { return phi_g + linear_part; }
};

// Phi_f(S) = Phi_g(S) + l(pi_[ell](S)), the local-search guide.
inline PotentialValue phi_f(const LiftedSolution& s, const Decomposition& d,
                            const PotentialParams& params) {
  PotentialValue v;
  v.phi_g = phi_g(s.by_color(), [&d](ElementSet t) { return d.g_value(t); }, params);
  v.linear_part = d.l_value(s.support());
  return v;
}

// Phi_f(S - out + in) - Phi_f(S) without touching subsets J that contain
// neither color: their projections are unchanged and cancel. For distinct
// colors that visits 3 * 2^(ell-2) of the 2^ell subsets.
inline double swap_delta(const LiftedSolution& s, LiftedElement out, LiftedElement in,
                         const Decomposition& d, const PotentialParams& params) {
  if (!s.contains(out)) {
    throw InputError("swap_delta: " + out.to_string() + " not in the solution");
  }
  if (in == out) return 0.0;
  if (in.color < 1 || in.color > params.ell) {
    throw InputError("swap_delta: color " + std::to_string(in.color) + " outside [1," +
                     std::to_string(params.ell) + "]");
  }
  if (s.support().contains(in.element) && in.element != out.element) {
    throw InputError("swap_delta: adding " + in.to_string() +
                     " would break colorfulness of " + s.support().to_string());
  }

  const ColorMask limit = ColorMask{1} << params.ell;
  const ColorMask out_bit = color_bit(out.color);
  const ColorMask in_bit = color_bit(in.color);
  double sum = 0.0;
  for (ColorMask j = 1; j < limit; ++j) {
    if ((j & (out_bit | in_bit)) == 0) continue;
    ElementSet before = s.project(j);
    ElementSet after = before;
    if (j & out_bit) after = after.without(out.element);
    if (j & in_bit) after = after.with(in.element);
    if (after == before) continue;
    sum += params.alphas[static_cast<std::size_t>(std::popcount(j) - 1)] *
           (d.g_value(after) - d.g_value(before));
  }
  double delta = params.prefactor * sum;
  if (in.element != out.element) {
    delta += d.l_weights[static_cast<std::size_t>(in.element)] -
             d.l_weights[static_cast<std::size_t>(out.element)];
  }
  return delta;
}

}  // namespace curvmax
