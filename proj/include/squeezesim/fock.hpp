#pragma once
// Truncated Fock-space primitives for the two-cavity + mechanics system.
//
// Basis convention: the composite index runs left cavity (slowest), then
// right cavity, then mechanical level (fastest):
//
//   index(nl, nr, m) = (nl * dim_right + nr) * dim_mech + m
//
// All operators live on hard-wall truncations.  Truncation does not break
// unitarity of the displacement operator (the truncated generator is still
// skew-Hermitian); what it costs is fidelity to the untruncated operator near
// the edge, and displacement_truncation_defect measures exactly that.

#include "linalg.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace squeezesim {

struct HilbertSpec {
  int dim_left = 1;
  int dim_right = 1;
  int dim_mech = 1;

  HilbertSpec() = default;
  HilbertSpec(int dl, int dr, int dm) : dim_left(dl), dim_right(dr), dim_mech(dm) {
    if (dl < 1 || dr < 1 || dm < 1)
      throw std::invalid_argument("HilbertSpec: all dimensions must be >= 1");
  }

  static HilbertSpec mechanics(int dm) { return HilbertSpec(1, 1, dm); }

  int total() const { return dim_left * dim_right * dim_mech; }
  bool mech_only() const { return dim_left == 1 && dim_right == 1; }

  int index(int nl, int nr, int m) const {
    if (nl < 0 || nl >= dim_left || nr < 0 || nr >= dim_right || m < 0 || m >= dim_mech)
      throw std::out_of_range("HilbertSpec: occupation (" + std::to_string(nl) + "," +
                              std::to_string(nr) + "," + std::to_string(m) +
                              ") outside truncation");
    return (nl * dim_right + nr) * dim_mech + m;
  }

  friend bool operator==(const HilbertSpec&, const HilbertSpec&) = default;
};

/// Normalized pure state.  Constructors normalize, so the norm invariant
/// holds by construction; a zero (or non-finite) vector is rejected.
class QuantumState {
 public:
  QuantumState(HilbertSpec spec, CVector amplitudes)
      : spec_(spec), amp_(std::move(amplitudes)) {
    if (amp_.size() != spec_.total())
      throw std::invalid_argument("QuantumState: amplitude vector size does not match spec");
    const double n = amp_.norm();
    if (!std::isfinite(n) || n <= 0.0)
      throw std::invalid_argument("QuantumState: vector has zero or non-finite norm");
    amp_ /= n;
  }

  static QuantumState basis(const HilbertSpec& spec, int nl, int nr, int m) {
    CVector v = CVector::Zero(spec.total());
    v[spec.index(nl, nr, m)] = 1.0;
    return QuantumState(spec, std::move(v));
  }

  const HilbertSpec& spec() const { return spec_; }
  const CVector& amplitudes() const { return amp_; }
  Complex amplitude(int nl, int nr, int m) const { return amp_[spec_.index(nl, nr, m)]; }

 private:
  HilbertSpec spec_;
  CVector amp_;
};

inline Complex inner_product(const QuantumState& a, const QuantumState& b) {
  if (!(a.spec() == b.spec()))
    throw std::invalid_argument("inner_product: states live on different spaces");
  return a.amplitudes().dot(b.amplitudes());  // Eigen dot conjugates the left factor
}

/// Hermitian unit-trace density matrix.  Roundoff-level Hermiticity residue
/// and trace error are repaired silently; anything beyond `ctor_tol` is a
/// caller bug and throws.  Positivity is not checked on construction (it
/// costs an eigensolve); use min_eigenvalue() where it matters.
class DensityMatrix {
 public:
  static constexpr double ctor_tol = 1e-6;

  DensityMatrix(HilbertSpec spec, Operator rho) : spec_(spec), rho_(std::move(rho)) {
    if (rho_.rows() != spec_.total() || rho_.cols() != spec_.total())
      throw std::invalid_argument("DensityMatrix: matrix size does not match spec");
    const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (!(herm <= ctor_tol))
      throw std::invalid_argument("DensityMatrix: not Hermitian (residue " + std::to_string(herm) + ")");
    rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
    const double tr = rho_.trace().real();
    if (!(std::abs(tr - 1.0) <= ctor_tol))
      throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
    rho_ /= tr;
  }

  const HilbertSpec& spec() const { return spec_; }
  const Operator& matrix() const { return rho_; }
  double min_eigenvalue() const { return min_eigenvalue_hermitian(rho_); }

 private:
  HilbertSpec spec_;
  Operator rho_;
};

inline DensityMatrix outer_product(const QuantumState& s) {
  return DensityMatrix(s.spec(), s.amplitudes() * s.amplitudes().adjoint());
}

// --- single-mode operators ---------------------------------------------------

inline Operator annihilation(int dim) {
  if (dim < 1) throw std::invalid_argument("annihilation: dim must be >= 1");
  Operator a = Operator::Zero(dim, dim);
  for (int m = 1; m < dim; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
  return a;
}

inline Operator creation(int dim) { return annihilation(dim).adjoint(); }

inline Operator number_operator(int dim) {
  Operator n = Operator::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) n(m, m) = m;
  return n;
}

inline Operator identity(int dim) { return Operator::Identity(dim, dim); }

/// (-1)^n photon/phonon parity.
inline Operator parity_operator(int dim) {
  Operator p = Operator::Zero(dim, dim);
  for (int m = 0; m < dim; ++m) p(m, m) = (m % 2 == 0) ? 1.0 : -1.0;
  return p;
}

/// Kronecker product, left factor major (matches HilbertSpec::index).
inline Operator tensor(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// --- displacement ------------------------------------------------------------

/// D(alpha) = exp(alpha b† - conj(alpha) b) on `dim` levels via expm of the
/// truncated generator.
inline Operator displacement(Complex alpha, int dim) {
  Operator g = Operator::Zero(dim, dim);
  for (int m = 1; m < dim; ++m) {
    const double s = std::sqrt(static_cast<double>(m));
    g(m, m - 1) = alpha * s;
    g(m - 1, m) = -std::conj(alpha) * s;
  }
  return expm(g);
}

/// Truncation quality of D(alpha) on `dim` levels, measured as the l2 error
/// of the displaced vacuum against the exact coherent amplitudes.  This is
/// the quantity that actually converges as dim grows (the operator itself
/// stays unitary under truncation).
inline double displacement_truncation_defect(Complex alpha, int dim) {
  const Operator d = displacement(alpha, dim);
  CVector exact(dim);
  Complex c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n < dim; ++n) {
    exact[n] = c;
    c *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return (d.col(0) - exact).norm();
}

// --- reductions --------------------------------------------------------------

/// Trace out both cavities, leaving the mechanical density matrix.
inline DensityMatrix partial_trace_mechanical(const DensityMatrix& rho) {
  const HilbertSpec& s = rho.spec();
  const int dm = s.dim_mech;
  Operator out = Operator::Zero(dm, dm);
  for (int nl = 0; nl < s.dim_left; ++nl)
    for (int nr = 0; nr < s.dim_right; ++nr) {
      const int base = (nl * s.dim_right + nr) * dm;
      out += rho.matrix().block(base, base, dm, dm);
    }
  return DensityMatrix(HilbertSpec::mechanics(dm), std::move(out));
}

/// Mechanical state conditioned on finding the cavities in |nl, nr>, together
/// with the probability of that outcome.
inline std::pair<double, DensityMatrix> conditional_mechanical_state(const DensityMatrix& rho,
                                                                     int nl, int nr) {
  const HilbertSpec& s = rho.spec();
  const int dm = s.dim_mech;
  const int base = s.index(nl, nr, 0);
  Operator block = rho.matrix().block(base, base, dm, dm);
  const double p = block.trace().real();
  if (p <= 1e-12)
    throw std::runtime_error("conditional_mechanical_state: outcome probability is zero");
  block /= p;
  return {p, DensityMatrix(HilbertSpec::mechanics(dm), std::move(block))};
}

}  // namespace squeezesim
