#pragma once
// Closed-form solution of the effective squeeze dynamics: propagator
// parameters, maximal-squeezing time, squeezed-vacuum Fock expansion, and the
// analytic single-photon / superposed tripartite states they assemble into.

#include "model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace squeezesim {

/// Outputs of the analytic propagator at one time, for one value n_lr of the
/// cavity photon-number inversion n_L - n_R.
struct SqueezeRecord {
  double t = 0.0;
  double r = 0.0;      // 2 g n_lr
  Complex chi;         // sqrt(delta^2 - r^2); imaginary in the monotone regime
  double eta = 0.0;    // continuous (branch-tracked) phase
  Complex xi;          // squeeze parameter in the co-rotating frame
  double R = 0.0;      // |xi| = |Z|
  double Phi = 0.0;    // arg(Z), in (-pi, pi]
  Complex Z;           // xi * exp(-2i (omega_M - delta) t): the lab-frame parameter
  double theta = 0.0;  // global phase
};

/// Evaluates the squeeze propagator at time t for photon inversion n_lr.
/// Three regimes, split by the sign of chi^2 = delta^2 - (2 g n_lr)^2:
/// periodic (sin chi t / chi), linear (t), and monotone (sinh kappa t / kappa).
inline SqueezeRecord squeeze_parameters(double t, const SystemParams& params, int n_lr) {
  params.validate();
  const EffectiveParams eff = effective_parameters(params);
  const double g = eff.g_eff;
  const double delta = eff.delta_eff;

  SqueezeRecord rec;
  rec.t = t;
  rec.r = 2.0 * g * n_lr;
  const double p = -2.0 * delta;
  const double chi2 = delta * delta - rec.r * rec.r;

  double s = 0.0;  // the sin-like envelope factor
  if (chi2 > 0.0) {
    const double chi = std::sqrt(chi2);
    rec.chi = chi;
    s = std::sin(chi * t) / chi;
    // Exact branch tracking: eta = atan2 on the principal cell plus 2 pi per
    // completed cell, winding in the direction of p.  Continuous in t because
    // the atan2 crossings at theta_r = +-pi land on the side sign(p) selects.
    const double theta = chi * t;
    const double cells = std::round(theta / (2.0 * std::numbers::pi));
    const double theta_r = theta - 2.0 * std::numbers::pi * cells;
    rec.eta = std::atan2(p * std::sin(theta_r), 2.0 * chi * std::cos(theta_r)) +
              2.0 * std::numbers::pi * ((p > 0.0) - (p < 0.0)) * cells;
  } else if (chi2 == 0.0) {
    rec.chi = 0.0;
    s = t;
    rec.eta = std::atan(0.5 * p * t);
  } else {
    const double kappa = std::sqrt(-chi2);
    rec.chi = Complex(0.0, kappa);
    s = std::sinh(kappa * t) / kappa;
    rec.eta = std::atan(0.5 * p * std::tanh(kappa * t) / kappa);
  }

  const double a = std::asinh(rec.r * s);
  rec.xi = std::polar(1.0, rec.eta + 0.5 * std::numbers::pi) * a;
  rec.R = std::abs(a);
  rec.Z = rec.xi * std::polar(1.0, -2.0 * (params.omega_M - delta) * t);
  rec.Phi = std::arg(rec.Z);
  rec.theta = -0.5 * (delta * t + rec.eta - params.Delta0 * t);
  return rec;
}

/// First time of maximal squeezing, T_M = pi / (2 chi).  Only the periodic
/// regime delta > 2 |g n_lr| has one; elsewhere R(t) grows without bound.
inline double t_max_squeeze(const SystemParams& params, int n_lr) {
  params.validate();
  const EffectiveParams eff = effective_parameters(params);
  const double r = 2.0 * eff.g_eff * n_lr;
  if (!(eff.delta_eff > std::abs(r)))
    throw std::domain_error("t_max_squeeze: monotone regime (delta <= 2|g n_lr|) has no maximum");
  return 0.5 * std::numbers::pi / std::sqrt(eff.delta_eff * eff.delta_eff - r * r);
}

/// Squeezing of the minimal quadrature variance relative to vacuum, in dB:
/// -10 log10 exp(-2R) = 20 R log10(e).
inline double squeezing_db(double R) {
  if (!(R >= 0.0)) throw std::domain_error("squeezing_db: R must be >= 0");
  return 20.0 * R / std::numbers::ln10;
}

/// Squeezed vacuum truncated to dim_mech Fock levels and renormalized there.
struct SqueezedVacuum {
  CVector amplitudes;      // unit norm over the truncated support
  double tail_mass = 0.0;  // squared-amplitude mass beyond the truncation
  bool truncated = false;  // tail_mass > 1e-6
};

/// Fock expansion of the squeezed vacuum with parameter Z = R e^{i Phi}:
/// amplitude on level 2m is (-1)^m (cosh R)^{-1/2} sqrt((2m)!)/(2^m m!)
/// e^{i m Phi} tanh^m R, zero on odd levels.  Evaluated by the term ratio
/// -e^{i Phi} tanh R sqrt((2m+1)/(2m+2)), which stays finite at any depth.
inline SqueezedVacuum squeezed_vacuum_state(Complex Z, int dim_mech) {
  if (dim_mech < 2) throw std::invalid_argument("squeezed_vacuum_state: dim_mech must be >= 2");
  const double R = std::abs(Z);
  const Complex ratio_base = (R == 0.0) ? Complex(0.0) : -(Z / R) * std::tanh(R);

  SqueezedVacuum out;
  out.amplitudes = CVector::Zero(dim_mech);
  Complex s = 1.0 / std::sqrt(std::cosh(R));
  double mass = 0.0;
  for (int m = 0; 2 * m < dim_mech; ++m) {
    out.amplitudes[2 * m] = s;
    mass += std::norm(s);
    s *= ratio_base * std::sqrt((2.0 * m + 1.0) / (2.0 * m + 2.0));
  }
  out.tail_mass = std::max(0.0, 1.0 - mass);
  out.truncated = out.tail_mass > 1e-6;
  out.amplitudes /= std::sqrt(mass);
  return out;
}

namespace detail {

inline void require_frequency_scheme(const SystemParams& params, const char* who) {
  if (params.scheme != DriveScheme::FrequencyModulated)
    throw std::invalid_argument(std::string(who) +
                                ": closed-form state requires the frequency-modulated drive");
}

}  // namespace detail

/// State evolved from |1,0,0>: the cavity photon Rabi-oscillates while the
/// membrane is squeezed, and the two factorize,
///   e^{-i(omega_c t + theta)} [cos(Jt) |10> - i sin(Jt) |01>] (x) |Z(t)>.
inline QuantumState analytic_state_single(double t, const SystemParams& params,
                                          int dim_mech = 160) {
  detail::require_frequency_scheme(params, "analytic_state_single");
  const SqueezeRecord rec = squeeze_parameters(t, params, 1);
  const SqueezedVacuum sv = squeezed_vacuum_state(rec.Z, dim_mech);

  const HilbertSpec spec(2, 2, dim_mech);
  const Complex phase = std::polar(1.0, -(params.omega_c * t + rec.theta));
  const Complex c_left = phase * std::cos(params.J * t);
  const Complex c_right = phase * Complex(0.0, -1.0) * std::sin(params.J * t);

  CVector amps = CVector::Zero(spec.total());
  for (int m = 0; m < dim_mech; ++m) {
    amps[spec.index(1, 0, m)] = c_left * sv.amplitudes[m];
    amps[spec.index(0, 1, m)] = c_right * sv.amplitudes[m];
  }
  return QuantumState(spec, amps);
}

/// State evolved from (|10> + |01>)/sqrt(2) (x) |0>: each cavity branch drags
/// its own superposed squeezed state.
struct SuperposedState {
  QuantumState full;     // on HilbertSpec(2, 2, dim_mech)
  CVector phi_left;      // normalized mechanical branch states
  CVector phi_right;
  double norm_left = 0.0;   // branch norms before normalization
  double norm_right = 0.0;  // (they oscillate around 1; their squares sum to 2)
};

inline SuperposedState analytic_state_superposed(double t, const SystemParams& params,
                                                 int dim_mech = 160) {
  detail::require_frequency_scheme(params, "analytic_state_superposed");
  const SqueezeRecord rec = squeeze_parameters(t, params, 1);
  const CVector plus = squeezed_vacuum_state(rec.Z, dim_mech).amplitudes;
  const CVector minus = squeezed_vacuum_state(-rec.Z, dim_mech).amplitudes;

  const Complex mod_phase = std::polar(1.0, params.Delta0 * t);
  const Complex c = std::cos(params.J * t);
  const Complex is = Complex(0.0, 1.0) * std::sin(params.J * t);
  const CVector phi_l = c * plus - is * mod_phase * minus;
  const CVector phi_r = mod_phase * c * minus - is * plus;

  const HilbertSpec spec(2, 2, dim_mech);
  const Complex phase =
      std::polar(1.0, -(params.omega_c * t + rec.theta)) / std::numbers::sqrt2;
  CVector amps = CVector::Zero(spec.total());
  for (int m = 0; m < dim_mech; ++m) {
    amps[spec.index(1, 0, m)] = phase * phi_l[m];
    amps[spec.index(0, 1, m)] = phase * phi_r[m];
  }

  SuperposedState out{QuantumState(spec, amps), phi_l, phi_r, phi_l.norm(), phi_r.norm()};
  out.phi_left /= out.norm_left;
  out.phi_right /= out.norm_right;
  return out;
}

}  // namespace squeezesim
