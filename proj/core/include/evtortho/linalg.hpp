#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace evt {

/// Dense symmetric-friendly square matrix of dimension 1..3, value type.
///
/// Big enough for every information matrix in this library; kept as a plain
/// fixed-capacity value so matrices can be copied and compared freely in
/// tests and simulation records.
class SquareMatrix {
 public:
  SquareMatrix() : dim_(0) { data_.fill(0.0); }

  explicit SquareMatrix(std::size_t dim) : dim_(dim) {
    if (dim < 1 || dim > 3) {
      throw std::invalid_argument("SquareMatrix: dimension must be 1, 2 or 3");
    }
    data_.fill(0.0);
  }

  std::size_t dim() const { return dim_; }

  double& operator()(std::size_t i, std::size_t j) {
    check_index(i, j);
    return data_[i * 3 + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    check_index(i, j);
    return data_[i * 3 + j];
  }

  /// Replace the matrix by (M + Mᵀ)/2.
  void symmetrize() {
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = i + 1; j < dim_; ++j) {
        const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
        (*this)(i, j) = v;
        (*this)(j, i) = v;
      }
    }
  }

  double max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        m = std::max(m, std::abs((*this)(i, j)));
    return m;
  }

 private:
  void check_index(std::size_t i, std::size_t j) const {
    if (i >= dim_ || j >= dim_) {
      throw std::out_of_range("SquareMatrix: index out of range");
    }
  }

  std::size_t dim_;
  std::array<double, 9> data_;
};

/// Inverse via the adjugate (exact closed form for dims 1..3).
/// Throws std::runtime_error when the determinant is numerically zero.
SquareMatrix inverse(const SquareMatrix& m);

double determinant(const SquareMatrix& m);

/// Smallest eigenvalue of a symmetric matrix (closed form for dim 2,
/// cyclic Jacobi sweeps for dim 3).
double smallest_eigenvalue(const SquareMatrix& m);

/// Congruence transform Jᵀ·M·J. `J` maps new coordinates to old ones,
/// so the result is `M` expressed in the new coordinates.
SquareMatrix congruence(const SquareMatrix& m, const SquareMatrix& j);

/// Correlation matrix of a covariance matrix: C_ij = V_ij/√(V_ii·V_jj).
/// Throws std::runtime_error if any diagonal entry is not positive.
SquareMatrix correlation_from_covariance(const SquareMatrix& v);

}  // namespace evt
