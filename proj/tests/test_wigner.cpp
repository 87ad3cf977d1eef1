#include "squeezesim/wigner.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

using namespace squeezesim;
using Catch::Approx;

namespace {

constexpr double kTwoOverPi = 0.6366197723675814;

WignerGridSpec square_grid(double half_width, int points) {
  WignerGridSpec g;
  g.re_min = -half_width;
  g.re_max = half_width;
  g.re_points = points;
  g.im_min = -half_width;
  g.im_max = half_width;
  g.im_points = points;
  return g;
}

DensityMatrix pure_mechanical(const CVector& amps) {
  const CVector v = amps / amps.norm();
  return DensityMatrix(HilbertSpec::mechanics(int(v.size())), v * v.adjoint());
}

SystemParams working_point(double delta0 = 100.0) {
  SystemParams p;
  p.g0 = 1.0;
  p.J = 398.6;
  p.Delta0 = delta0;
  p.omega_M = p.J + 1.13;
  return p;
}

}  // namespace

TEST_CASE("Hermite polynomials at complex arguments") {
  const Complex z(0.3, -1.2);
  CHECK(hermite_complex(0, z) == Complex(1.0));
  CHECK(std::abs(hermite_complex(1, z) - 2.0 * z) < 1e-15);
  CHECK(hermite_complex(3, 1.0).real() == Approx(-4.0).margin(1e-12));
  CHECK(hermite_complex(2, 1.0).real() == Approx(2.0).margin(1e-12));
  // H4(x) = 16x^4 - 48x^2 + 12
  CHECK(hermite_complex(4, 0.7).real() == Approx(-7.6784).margin(1e-12));

  // parity H_n(-z) = (-1)^n H_n(z)
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 8; ++trial) {
    const Complex w(u(rng), u(rng));
    for (int n = 0; n <= 20; ++n) {
      const Complex a = hermite_complex(n, w);
      const Complex b = hermite_complex(n, -w);
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      CHECK(std::abs(b - sign * a) < 1e-10 * std::max(1.0, std::abs(a)));
    }
  }

  CHECK_THROWS_AS(hermite_complex(-1, z), std::out_of_range);
  CHECK_THROWS_AS(hermite_complex(513, z), std::out_of_range);
}

TEST_CASE("displaced squeezed amplitudes: limits, stability, normalization") {
  SECTION("coherent limit at Z = 0") {
    const Complex alpha(0.6, -0.4);
    Complex expected = std::exp(-0.5 * std::norm(alpha));
    for (int k = 0; k <= 12; ++k) {
      CHECK(std::abs(squeezed_coherent_amplitude(k, alpha, 0.0) - expected) < 1e-14);
      expected *= alpha / std::sqrt(double(k + 1));
    }
    // batch path hits the same limit with no special case
    const CVector q = squeezed_coherent_amplitudes(alpha, 0.0, 13);
    Complex c = std::exp(-0.5 * std::norm(alpha));
    for (int k = 0; k <= 12; ++k) {
      CHECK(std::abs(q[k] - c) < 1e-14);
      c *= alpha / std::sqrt(double(k + 1));
    }
  }

  SECTION("alpha = 0 reduces to the squeezed vacuum") {
    const Complex Z = std::polar(0.9, 0.55);
    const CVector sv = squeezed_vacuum_state(Z, 160).amplitudes;
    for (int k = 0; k < 160; ++k) {
      const Complex s = squeezed_coherent_amplitude(k, 0.0, Z);
      if (k % 2 == 1)
        CHECK(std::abs(s) == 0.0);
      else
        CHECK(std::abs(s - sv[k]) < 1e-12);
    }
  }

  SECTION("scalar, batch, and literal Hermite product agree") {
    const Complex alpha(1.0, 0.5);
    const Complex Z = std::polar(0.8, 0.3);
    const CVector q = squeezed_coherent_amplitudes(alpha, Z, 101);

    // literal product form, safe up to moderate k
    const auto literal = [&](int k) {
      const double R = std::abs(Z), th = std::arg(Z);
      const Complex eith = std::polar(1.0, th);
      const Complex u = std::polar(1.0, 0.5 * th);
      const Complex pref =
          std::exp(-0.5 * std::norm(alpha) -
                   0.5 * std::conj(alpha) * std::conj(alpha) * eith * std::tanh(R)) /
          std::sqrt(std::cosh(R));
      const Complex gamma = alpha * std::cosh(R) + std::conj(alpha) * eith * std::sinh(R);
      const Complex w = u * std::sqrt(0.5 * std::tanh(R));
      const Complex h = hermite_complex(k, gamma / (u * std::sqrt(std::sinh(2.0 * R))));
      Complex wk = 1.0;
      for (int n = 0; n < k; ++n) wk *= w;
      return pref * wk * std::exp(-0.5 * std::lgamma(k + 1.0)) * h;
    };

    for (int k = 0; k <= 100; ++k)
      CHECK(std::abs(squeezed_coherent_amplitude(k, alpha, Z) - q[k]) <
            1e-12 * std::max(1.0, std::abs(q[k])));
    for (int k = 0; k <= 60; ++k)
      CHECK(std::abs(literal(k) - q[k]) < 1e-12 + 1e-10 * std::abs(q[k]));
  }

  SECTION("normalization over the Fock ladder") {
    const CVector q = squeezed_coherent_amplitudes(Complex(1.0, 0.5), std::polar(0.8, 0.3), 121);
    CHECK(q.squaredNorm() == Approx(1.0).margin(1e-8));
  }

  CHECK_THROWS_AS(squeezed_coherent_amplitude(-1, 1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(squeezed_coherent_amplitudes(1.0, 0.5, 0), std::invalid_argument);
}

TEST_CASE("numerical Wigner reproduces Gaussian and Fock closed forms") {
  SECTION("vacuum") {
    CVector v = CVector::Zero(72);
    v[0] = 1.0;
    const WignerGrid w = wigner_numeric(pure_mechanical(v), square_grid(2.0, 41));
    double worst = 0.0;
    double mass = 0.0;
    for (int j = 0; j < 41; ++j)
      for (int i = 0; i < 41; ++i) {
        const double a2 = w.re_axis[i] * w.re_axis[i] + w.im_axis[j] * w.im_axis[j];
        worst = std::max(worst, std::abs(w.values(j, i) - kTwoOverPi * std::exp(-2.0 * a2)));
        mass += w.values(j, i) * w.cell_area;
      }
    CHECK(worst < 1e-9);
    CHECK(w.values(20, 20) == Approx(kTwoOverPi).margin(1e-12));
    CHECK(mass == Approx(1.0).margin(1e-2));
  }

  SECTION("single phonon is negative at the origin") {
    CVector v = CVector::Zero(72);
    v[1] = 1.0;
    const WignerGrid w = wigner_numeric(pure_mechanical(v), square_grid(2.0, 21));
    CHECK(w.values(10, 10) == Approx(-kTwoOverPi).margin(1e-10));
  }

  SECTION("squeezed vacuum: elliptical Gaussian, marginals, mass") {
    const double R = 0.7;
    const CVector sv = squeezed_vacuum_state(R, 144).amplitudes;  // Phi = 0
    const WignerGrid w = wigner_numeric(pure_mechanical(sv), square_grid(3.0, 61));

    double worst = 0.0, mass = 0.0;
    for (int j = 0; j < 61; ++j)
      for (int i = 0; i < 61; ++i) {
        const double x = w.re_axis[i], y = w.im_axis[j];
        const double ref =
            kTwoOverPi * std::exp(-2.0 * std::exp(2.0 * R) * x * x - 2.0 * std::exp(-2.0 * R) * y * y);
        worst = std::max(worst, std::abs(w.values(j, i) - ref));
        mass += w.values(j, i) * w.cell_area;
      }
    CHECK(worst < 1e-6);
    CHECK(mass == Approx(1.0).margin(1e-2));

    // marginal over the imaginary axis: position distribution with variance e^{-2R}/4
    double p_sum = 0.0, x_mean = 0.0, x2 = 0.0;
    for (int i = 0; i < 61; ++i) {
      double col = 0.0;
      for (int j = 0; j < 61; ++j) col += w.values(j, i);
      p_sum += col;
      x_mean += w.re_axis[i] * col;
      x2 += w.re_axis[i] * w.re_axis[i] * col;
    }
    x_mean /= p_sum;
    const double var = x2 / p_sum - x_mean * x_mean;
    CHECK(var == Approx(0.25 * std::exp(-2.0 * R)).epsilon(0.02));
  }

  SECTION("rotation covariance") {
    const int dim = 72;
    const int n = 33;
    const CVector q = squeezed_coherent_amplitudes(Complex(0.9, 0.4), std::polar(0.5, 0.8), dim);
    const WignerGrid w = wigner_numeric(pure_mechanical(q), square_grid(2.0, n));

    CVector rotated(dim);
    for (int k = 0; k < dim; ++k)
      rotated[k] = std::polar(1.0, -0.5 * std::numbers::pi * k) * q[k];
    const WignerGrid wr = wigner_numeric(pure_mechanical(rotated), square_grid(2.0, n));

    // e^{-i (pi/2) b†b} maps W to W(i alpha): W'(x, y) = W(-y, x)
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(wr.values(j, i) - w.values(i, n - 1 - j)));
    CHECK(worst < 1e-6);
  }

  SECTION("guards") {
    CVector v = CVector::Zero(40);
    v[0] = 1.0;
    CHECK_THROWS_AS(wigner_numeric(pure_mechanical(v), square_grid(3.0, 11)), std::runtime_error);

    const HilbertSpec full(2, 2, 8);
    const DensityMatrix rho(full, Operator::Identity(full.total(), full.total()));
    CHECK_THROWS_AS(wigner_numeric(rho, square_grid(1.0, 11)), std::invalid_argument);

    WignerGridSpec bad = square_grid(2.0, 11);
    bad.re_max = bad.re_min;
    CVector ok = CVector::Zero(32);
    ok[0] = 1.0;
    CHECK_THROWS_AS(wigner_numeric(pure_mechanical(ok), bad), std::invalid_argument);
  }
}

TEST_CASE("superposed branch Wigner: structure, identities, guards") {
  const SystemParams p = working_point();
  const double t_m = t_max_squeeze(p, 1);

  SECTION("unsqueezed limit collapses to the vacuum Gaussian") {
    SystemParams flat = p;
    flat.g0 = 0.0;  // no squeezing: both branch components are the vacuum
    const SuperposedWigner w =
        wigner_superposed_analytic(BranchSide::Left, flat, 0.7, square_grid(2.0, 21), 64);
    double worst = 0.0;
    for (int j = 0; j < 21; ++j)
      for (int i = 0; i < 21; ++i) {
        const double a2 =
            w.total.re_axis[i] * w.total.re_axis[i] + w.total.im_axis[j] * w.total.im_axis[j];
        worst = std::max(worst, std::abs(w.total.values(j, i) - kTwoOverPi * std::exp(-2.0 * a2)));
      }
    CHECK(worst < 1e-12);
  }

  SECTION("component identities at T_M") {
    const int n = 41;
    const SuperposedWigner w =
        wigner_superposed_analytic(BranchSide::Left, p, t_m, square_grid(3.0, n), 160);

    // W-+ is the conjugate kernel of W+-
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        worst = std::max(worst,
                         std::abs(w.w_minus_plus(j, i) - std::conj(w.w_plus_minus(j, i))));
    CHECK(worst == 0.0);

    // |-Z> is |Z> rotated by pi/2: W-(alpha) = W+(i alpha)
    worst = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(w.w_minus(j, i) - w.w_plus(i, n - 1 - j)));
    CHECK(worst < 1e-12);

    // interference kernel carries weight (fringes), and the incoherent
    // mixture without it is pointwise non-negative
    CHECK(w.w_plus_minus.cwiseAbs().maxCoeff() > 0.1);
    const double c2 = std::pow(std::cos(p.J * t_m), 2);
    double min_mix = 1e300;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        min_mix = std::min(min_mix, c2 * w.w_plus(j, i) + (1.0 - c2) * w.w_minus(j, i));
    CHECK(min_mix >= -1e-9);

    // the total dips negative somewhere: genuinely nonclassical interference
    CHECK(w.total.values.minCoeff() < -1e-3);
  }

  SECTION("branch norms and total mass") {
    // mass check needs a grid that encloses the anti-squeezed lobes
    const SuperposedWigner w =
        wigner_superposed_analytic(BranchSide::Left, p, t_m, square_grid(6.0, 121), 320);
    CHECK(w.total.values.sum() * w.total.cell_area == Approx(1.0).margin(1e-2));

    const SuperposedState sup = analytic_state_superposed(t_m, p, 320);
    CHECK(w.norm_sq == Approx(sup.norm_left * sup.norm_left).margin(1e-9));
  }

  SECTION("right branch is the left branch rotated by pi/2 when the modulation phase is real") {
    SystemParams star = p;
    star.Delta0 = 95.0 * std::numbers::pi / t_m;  // e^{i Delta0 T_M} = -1 exactly
    const int n = 41;
    const double t_star = t_max_squeeze(star, 1);  // unchanged: T_M depends on delta only
    const SuperposedWigner wl =
        wigner_superposed_analytic(BranchSide::Left, star, t_star, square_grid(3.0, n), 160);
    const SuperposedWigner wr =
        wigner_superposed_analytic(BranchSide::Right, star, t_star, square_grid(3.0, n), 160);
    double worst = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        worst = std::max(worst, std::abs(wr.total.values(j, i) - wl.total.values(i, n - 1 - j)));
    CHECK(worst < 1e-9);
  }

  SECTION("guards") {
    CHECK_THROWS_AS(
        wigner_superposed_analytic(BranchSide::Left, p, t_m, square_grid(3.0, 11), 40),
        std::runtime_error);
    SystemParams coupled = p;
    coupled.scheme = DriveScheme::CouplingModulated;
    coupled.omega0 = 100.0;
    coupled.omega_p = 200.0;
    CHECK_THROWS_AS(
        wigner_superposed_analytic(BranchSide::Left, coupled, 0.3, square_grid(2.0, 11), 64),
        std::invalid_argument);
  }
}

TEST_CASE("closed-form and displacement-parity Wigner agree on the same state") {
  const SystemParams p = working_point();
  const double t_m = t_max_squeeze(p, 1);
  const int dim = 160;
  const int n = 41;
  const WignerGridSpec grid = square_grid(3.0, n);

  // single squeezed vacuum against the W+ component
  const SqueezeRecord rec = squeeze_parameters(t_m, p, 1);
  const CVector sv = squeezed_vacuum_state(rec.Z, dim).amplitudes;
  const WignerGrid w_sv = wigner_numeric(pure_mechanical(sv), grid);
  const SuperposedWigner w_an =
      wigner_superposed_analytic(BranchSide::Left, p, t_m, grid, dim);
  double worst_plus = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      worst_plus = std::max(worst_plus, std::abs(w_sv.values(j, i) - w_an.w_plus(j, i)));
  CHECK(worst_plus < 1e-6);

  // full superposed left branch against the assembled total
  const SuperposedState sup = analytic_state_superposed(t_m, p, dim);
  const WignerGrid w_num = wigner_numeric(pure_mechanical(sup.phi_left), grid);
  double worst = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(w_num.values(j, i) - w_an.total.values(j, i)));
  CHECK(worst < 1e-3);
}
