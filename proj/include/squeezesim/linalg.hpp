#pragma once
// Shared dense/sparse linear-algebra helpers.  Everything downstream works in
// terms of Eigen dense matrices plus a small CSR type that keeps integrator
// hot loops away from dense products.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace squeezesim {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;  // dense complex square matrix
using CVector = Eigen::VectorXcd;

/// Matrix exponential by scaling-and-squaring around a degree-18 Taylor
/// polynomial in Paterson-Stockmeyer form.  Degree 18 is full double
/// precision for ||A|| <= 1, which the scaling step guarantees.
inline Operator expm(const Operator& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix must be square");
  const Eigen::Index n = a.rows();

  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > 1.0) squarings = static_cast<int>(std::ceil(std::log2(norm1)));

  const Operator x = a * std::ldexp(1.0, -squarings);

  double coeff[19];
  coeff[0] = 1.0;
  for (int k = 1; k <= 18; ++k) coeff[k] = coeff[k - 1] / k;

  // powers x^2..x^6, then t = b0 + x^6 (b1 + x^6 (b2 + c18 x^6))
  const Operator x2 = x * x;
  const Operator x3 = x2 * x;
  const Operator x4 = x2 * x2;
  const Operator x5 = x2 * x3;
  const Operator x6 = x3 * x3;

  auto block = [&](int j) {
    Operator b = coeff[6 * j] * Operator::Identity(n, n);
    b += coeff[6 * j + 1] * x + coeff[6 * j + 2] * x2 + coeff[6 * j + 3] * x3;
    b += coeff[6 * j + 4] * x4 + coeff[6 * j + 5] * x5;
    return b;
  };

  Operator t = block(2) + coeff[18] * x6;
  t = block(1) + x6 * t;
  t = block(0) + x6 * t;

  for (int k = 0; k < squarings; ++k) t = t * t;
  return t;
}

inline bool is_hermitian(const Operator& a, double tol = 1e-10) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Smallest eigenvalue of a (numerically) Hermitian matrix; symmetrizes first
/// so roundoff-level asymmetry cannot poison the solver.
inline double min_eigenvalue_hermitian(const Operator& a) {
  Operator sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("min_eigenvalue_hermitian: eigensolver failed");
  return es.eigenvalues().minCoeff();
}

/// Compressed sparse row matrix over complex entries.
struct CsrMatrix {
  int dim = 0;
  std::vector<int> row_ptr;  // size dim+1
  std::vector<int> col;
  std::vector<Complex> val;

  static CsrMatrix from_dense(const Operator& a, double drop_tol = 0.0) {
    if (a.rows() != a.cols()) throw std::invalid_argument("CsrMatrix: matrix must be square");
    CsrMatrix m;
    m.dim = static_cast<int>(a.rows());
    m.row_ptr.assign(m.dim + 1, 0);
    for (int i = 0; i < m.dim; ++i) {
      for (int j = 0; j < m.dim; ++j) {
        const Complex v = a(i, j);
        if (std::abs(v) > drop_tol) {
          m.col.push_back(j);
          m.val.push_back(v);
        }
      }
      m.row_ptr[i + 1] = static_cast<int>(m.col.size());
    }
    return m;
  }

  /// y += scale * (A x)
  void multiply_add(const Complex* x, Complex* y, Complex scale = Complex(1, 0)) const {
    for (int i = 0; i < dim; ++i) {
      Complex acc(0, 0);
      for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
      y[i] += scale * acc;
    }
  }

  Operator to_dense() const {
    Operator a = Operator::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) a(i, col[k]) += val[k];
    return a;
  }

  std::size_t nnz() const { return val.size(); }
};

}  // namespace squeezesim
