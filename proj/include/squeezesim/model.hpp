#pragma once
// System definition: drive schemes, effective parameters, Hamiltonian
// builders, and the rotating-wave validity report.
//
// Everything is expressed in units of the bare quadratic coupling g0 (and
// hbar = 1); keeping g0 as an explicit field lets configs spell that out.

#include "fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace squeezesim {

enum class DriveScheme {
  /// Cavity frequencies modulated against each other:
  ///   omega_L/R(t) = omega_c +/- Delta0 cos(2 J t), static tunneling J.
  FrequencyModulated,
  /// Static cavity frequencies; tunneling and quadratic coupling modulated:
  ///   J(t) = J omega0 cos(omega0 t)   (J dimensionless here),
  ///   g(t) = g0 cos(2 omega_p t).
  CouplingModulated,
};

struct SystemParams {
  double g0 = 1.0;       // bare quadratic optomechanical coupling; unit of rate
  double omega_c = 0.0;  // common cavity frequency (fidelities never see it)
  double omega_M = 0.0;  // mechanical frequency
  double J = 0.0;        // photon tunneling, or modulation index when coupling-modulated
  double Delta0 = 0.0;   // cavity frequency-modulation depth (frequency scheme only)
  DriveScheme scheme = DriveScheme::FrequencyModulated;

  // coupling-modulated drive only:
  double omega0 = 0.0;   // tunneling modulation frequency
  double omega_p = 0.0;  // half the coupling modulation frequency
  int n0 = 0;            // sideband index picked by the resonance condition

  /// Effective squeeze coupling of the frequency-modulated scheme.
  double g() const { return 0.5 * g0; }
  /// Effective detuning of the frequency-modulated scheme.
  double delta() const { return omega_M - J; }

  void validate() const {
    if (!(g0 >= 0.0)) throw std::invalid_argument("SystemParams: g0 must be >= 0");
    if (omega_M < 0.0) throw std::invalid_argument("SystemParams: omega_M must be >= 0");
    if (scheme == DriveScheme::CouplingModulated) {
      if (!(omega0 > 0.0) || !(omega_p > 0.0))
        throw std::invalid_argument("SystemParams: coupling-modulated drive needs omega0, omega_p > 0");
      if (n0 < 0 || 2 * n0 > 64)
        throw std::invalid_argument("SystemParams: n0 out of range");
    }
  }
};

// --- Bessel J_n --------------------------------------------------------------

/// Integer-order Bessel function of the first kind.  Ascending power series
/// for |x| <= 10 (cancellation stays below ~1e-13 there), Miller downward
/// recurrence normalized by J_0 + 2 sum J_2k = 1 above.  Valid for
/// 0 <= n <= 64, |x| <= 1e4, absolute error below 1e-12.
inline double bessel_j(int n, double x) {
  if (n < 0 || n > 64) throw std::domain_error("bessel_j: order out of range [0, 64]");
  if (!(std::abs(x) <= 1e4)) throw std::domain_error("bessel_j: |x| out of range (<= 1e4)");

  double sign = 1.0;
  if (x < 0.0) {  // J_n(-x) = (-1)^n J_n(x)
    x = -x;
    if (n % 2 == 1) sign = -1.0;
  }

  if (x <= 10.0) {
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= 0.5 * x / k;
    double sum = term;
    const double q = -0.25 * x * x;
    for (int k = 1; k <= 240; ++k) {
      term *= q / (static_cast<double>(k) * (n + k));
      sum += term;
      if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sign * sum;
  }

  // Downward recurrence must start well above the turning point k ~ x, where
  // J_k(x) is already in its super-exponential tail.
  const double top = std::max(static_cast<double>(n), x);
  int start = static_cast<int>(std::ceil(top + 20.0 + 8.0 * std::cbrt(top)));
  if (start % 2 == 1) ++start;

  double fk1 = 0.0;        // f_{k+1}
  double fk = 1e-30;       // f_k
  double norm = 0.0;       // J_0 + 2 sum_{k>=1} J_{2k}, accumulated on the fly
  double fn = 0.0;
  for (int k = start; k >= 1; --k) {
    const double fk_1 = (2.0 * k / x) * fk - fk1;
    fk1 = fk;
    fk = fk_1;
    if (k - 1 == n) fn = fk;
    if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? fk : 2.0 * fk;
    if (std::abs(fk) > 1e250) {  // rescale everything; the recurrence is linear
      fk /= 1e250;
      fk1 /= 1e250;
      fn /= 1e250;
      norm /= 1e250;
    }
  }
  return sign * fn / norm;
}

// --- effective parameters ----------------------------------------------------

struct EffectiveParams {
  double g_eff = 0.0;
  double delta_eff = 0.0;
};

/// Effective (g', delta') of the coupling-modulated drive: the 2 n0-th Bessel
/// sideband of the tunneling modulation carries the squeeze interaction.
inline EffectiveParams effective_coupling_modulated(const SystemParams& p) {
  if (p.scheme != DriveScheme::CouplingModulated)
    throw std::invalid_argument("effective_coupling_modulated: wrong drive scheme");
  p.validate();
  return {0.5 * p.g0 * bessel_j(2 * p.n0, 2.0 * p.J),
          p.omega_M - p.omega_p - p.n0 * p.omega0};
}

/// (g_eff, delta_eff) of either scheme; this is the pair the closed-form
/// squeezing expressions run on.
inline EffectiveParams effective_parameters(const SystemParams& p) {
  if (p.scheme == DriveScheme::CouplingModulated) return effective_coupling_modulated(p);
  return {p.g(), p.delta()};
}

// --- rotating-wave validity --------------------------------------------------

struct RwaCondition {
  std::string label;
  double lhs = 0.0;   // the scale that must dominate
  double rhs = 0.0;   // the scale that must be dominated
  double ratio = 0.0;
  bool passed = false;
};

struct RwaReport {
  double margin = 0.0;
  bool passed = false;
  std::vector<RwaCondition> conditions;
};

/// Checks every separation-of-scales condition behind the effective model,
/// each as lhs/rhs >= margin.  A ratio of inf (rhs exactly zero) passes.
inline RwaReport check_rwa_conditions(const SystemParams& p, double margin = 10.0) {
  p.validate();
  if (!(margin > 0.0)) throw std::invalid_argument("check_rwa_conditions: margin must be positive");

  RwaReport report;
  report.margin = margin;
  auto add = [&](std::string label, double lhs, double rhs) {
    RwaCondition c;
    c.label = std::move(label);
    c.lhs = lhs;
    c.rhs = rhs;
    c.ratio = (rhs == 0.0) ? std::numeric_limits<double>::infinity() : lhs / rhs;
    c.passed = c.ratio >= margin;
    report.conditions.push_back(std::move(c));
  };

  if (p.scheme == DriveScheme::FrequencyModulated) {
    add("J >> (5/16) Delta0", p.J, (5.0 / 16.0) * p.Delta0);
    add("Delta0 >> 2 g", p.Delta0, 2.0 * p.g());
    add("Delta0 >> |delta|", p.Delta0, std::abs(p.delta()));
    add("|Delta0 - 2 J| >> g", std::abs(p.Delta0 - 2.0 * p.J), p.g());
  } else {
    const EffectiveParams eff = effective_coupling_modulated(p);
    const double dp = std::abs(eff.delta_eff);
    const double gp = std::abs(eff.g_eff);
    add("omega0 >> |delta'|", p.omega0, dp);
    add("omega0 >> |g'|", p.omega0, gp);
    add("omega_M - omega_p >> |delta'|", p.omega_M - p.omega_p, dp);
    add("omega_M - omega_p >> |g'|", p.omega_M - p.omega_p, gp);
    add("omega_p >> |delta'|", p.omega_p, dp);
    add("omega_p >> |g'|", p.omega_p, gp);
  }

  report.passed = true;
  for (const auto& c : report.conditions) report.passed = report.passed && c.passed;
  return report;
}

// --- Hamiltonians ------------------------------------------------------------

/// Instantaneous cavity frequencies of the drive.
inline double omega_left(const SystemParams& p, double t) {
  return p.scheme == DriveScheme::FrequencyModulated
             ? p.omega_c + p.Delta0 * std::cos(2.0 * p.J * t)
             : p.omega_c;
}

inline double omega_right(const SystemParams& p, double t) {
  return p.scheme == DriveScheme::FrequencyModulated
             ? p.omega_c - p.Delta0 * std::cos(2.0 * p.J * t)
             : p.omega_c;
}

/// Instantaneous tunneling rate and quadratic coupling.
inline double tunneling_rate(const SystemParams& p, double t) {
  return p.scheme == DriveScheme::FrequencyModulated ? p.J
                                                     : p.J * p.omega0 * std::cos(p.omega0 * t);
}

inline double quadratic_coupling(const SystemParams& p, double t) {
  return p.scheme == DriveScheme::FrequencyModulated ? p.g0
                                                     : p.g0 * std::cos(2.0 * p.omega_p * t);
}

namespace detail {

/// The four operator blocks every Hamiltonian here is assembled from, on the
/// full composite space.
struct HamiltonianBlocks {
  Operator n_left;        // a_L† a_L
  Operator n_right;       // a_R† a_R
  Operator hop;           // a_L† a_R + a_R† a_L
  Operator n_mech;        // b† b
  Operator quad_signed;   // (n_L - n_R)(b + b†)^2
  Operator squeeze_signed;  // (n_L - n_R)(b^2 + b†^2)
};

inline HamiltonianBlocks hamiltonian_blocks(const HilbertSpec& s) {
  const Operator il = identity(s.dim_left);
  const Operator ir = identity(s.dim_right);
  const Operator im = identity(s.dim_mech);
  const Operator al = annihilation(s.dim_left);
  const Operator ar = annihilation(s.dim_right);
  const Operator b = annihilation(s.dim_mech);

  HamiltonianBlocks blocks;
  blocks.n_left = tensor(tensor(number_operator(s.dim_left), ir), im);
  blocks.n_right = tensor(tensor(il, number_operator(s.dim_right)), im);
  // a_L† a_R + a_R† a_L on the cavity pair
  const Operator hop_cav = tensor(al.adjoint(), ar) + tensor(al, ar.adjoint());
  blocks.hop = tensor(hop_cav, im);
  blocks.n_mech = tensor(tensor(il, ir), number_operator(s.dim_mech));

  const Operator x = b + b.adjoint();
  const Operator nd = tensor(number_operator(s.dim_left), ir) - tensor(il, number_operator(s.dim_right));
  blocks.quad_signed = tensor(nd, x * x);
  blocks.squeeze_signed = tensor(nd, b * b + (b * b).adjoint());
  return blocks;
}

}  // namespace detail

/// Full lab-frame Hamiltonian at time t.
inline Operator build_hamiltonian(const SystemParams& p, const HilbertSpec& s, double t) {
  p.validate();
  const auto blocks = detail::hamiltonian_blocks(s);
  Operator h = omega_left(p, t) * blocks.n_left + omega_right(p, t) * blocks.n_right;
  h += tunneling_rate(p, t) * blocks.hop;
  h += p.omega_M * blocks.n_mech;
  h += quadratic_coupling(p, t) * blocks.quad_signed;
  return h;
}

/// Effective time-independent Hamiltonian after the rotating-wave reduction:
/// omega_c (n_L + n_R) + delta b†b + g (n_L - n_R)(b^2 + b†^2).
inline Operator build_effective_hamiltonian(const SystemParams& p, const HilbertSpec& s) {
  p.validate();
  const auto eff = effective_parameters(p);
  const auto blocks = detail::hamiltonian_blocks(s);
  return p.omega_c * (blocks.n_left + blocks.n_right) + eff.delta_eff * blocks.n_mech +
         eff.g_eff * blocks.squeeze_signed;
}

// --- time-dependent operator decomposition -----------------------------------

/// H(t) = sum_k coeff_k(t) * op_k with constant sparse op_k; a null coeff
/// means the term is static.  rotating_diagonal, when non-empty, is the
/// diagonal the integrator may factor out exactly (interaction picture).
struct TimeTerm {
  CsrMatrix op;
  std::function<double(double)> coeff;  // null => 1
};

struct TimeDependentOperator {
  int dim = 0;
  std::vector<TimeTerm> terms;
  std::vector<double> rotating_diagonal;

  Operator dense_at(double t) const {
    Operator h = Operator::Zero(dim, dim);
    for (const auto& term : terms)
      h += (term.coeff ? term.coeff(t) : 1.0) * term.op.to_dense();
    return h;
  }
};

/// Sparse term decomposition of build_hamiltonian, with the free-evolution
/// diagonal omega_c (n_L + n_R) + omega_M b†b exposed for exact factoring.
inline TimeDependentOperator hamiltonian_terms(const SystemParams& p, const HilbertSpec& s) {
  p.validate();
  const auto blocks = detail::hamiltonian_blocks(s);

  TimeDependentOperator out;
  out.dim = s.total();
  out.rotating_diagonal.resize(s.total());
  for (int nl = 0; nl < s.dim_left; ++nl)
    for (int nr = 0; nr < s.dim_right; ++nr)
      for (int m = 0; m < s.dim_mech; ++m)
        out.rotating_diagonal[s.index(nl, nr, m)] = p.omega_c * (nl + nr) + p.omega_M * m;

  if (p.scheme == DriveScheme::FrequencyModulated) {
    Operator static_part = p.omega_c * (blocks.n_left + blocks.n_right);
    static_part += p.J * blocks.hop + p.omega_M * blocks.n_mech + p.g0 * blocks.quad_signed;
    out.terms.push_back({CsrMatrix::from_dense(static_part), nullptr});

    const double two_j = 2.0 * p.J;
    const double depth = p.Delta0;
    out.terms.push_back({CsrMatrix::from_dense(blocks.n_left - blocks.n_right),
                         [two_j, depth](double t) { return depth * std::cos(two_j * t); }});
  } else {
    Operator static_part = p.omega_c * (blocks.n_left + blocks.n_right) + p.omega_M * blocks.n_mech;
    out.terms.push_back({CsrMatrix::from_dense(static_part), nullptr});

    const double jw = p.J * p.omega0;
    const double w0 = p.omega0;
    out.terms.push_back(
        {CsrMatrix::from_dense(blocks.hop), [jw, w0](double t) { return jw * std::cos(w0 * t); }});

    const double g0 = p.g0;
    const double two_wp = 2.0 * p.omega_p;
    out.terms.push_back({CsrMatrix::from_dense(blocks.quad_signed),
                         [g0, two_wp](double t) { return g0 * std::cos(two_wp * t); }});
  }
  return out;
}

}  // namespace squeezesim
