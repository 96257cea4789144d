#include "evtortho/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evt {

double determinant(const SquareMatrix& m) {
  switch (m.dim()) {
    case 1:
      return m(0, 0);
    case 2:
      return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    case 3:
      return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
             m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
             m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    default:
      throw std::invalid_argument("determinant: empty matrix");
  }
}

SquareMatrix inverse(const SquareMatrix& m) {
  const double det = determinant(m);
  const double scale = m.max_abs();
  if (!(std::abs(det) > 0.0) || !std::isfinite(det) ||
      std::abs(det) < 1e-300 * std::max(1.0, scale)) {
    throw std::runtime_error("inverse: matrix is numerically singular");
  }
  SquareMatrix r(m.dim());
  switch (m.dim()) {
    case 1:
      r(0, 0) = 1.0 / det;
      break;
    case 2:
      r(0, 0) = m(1, 1) / det;
      r(1, 1) = m(0, 0) / det;
      r(0, 1) = -m(0, 1) / det;
      r(1, 0) = -m(1, 0) / det;
      break;
    case 3:
      r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / det;
      r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / det;
      r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / det;
      r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / det;
      r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det;
      r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / det;
      r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / det;
      r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / det;
      r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det;
      break;
  }
  return r;
}

namespace {

// One full cyclic Jacobi sweep; returns the largest off-diagonal magnitude
// remaining.
double jacobi_sweep(SquareMatrix& a) {
  const std::size_t n = a.dim();
  for (std::size_t p = 0; p + 1 < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      const double apq = a(p, q);
      if (apq == 0.0) continue;
      const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                       (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;
      for (std::size_t k = 0; k < n; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
      }
      for (std::size_t k = 0; k < n; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
      }
    }
  }
  double off = 0.0;
  for (std::size_t p = 0; p + 1 < n; ++p)
    for (std::size_t q = p + 1; q < n; ++q)
      off = std::max(off, std::abs(a(p, q)));
  return off;
}

}  // namespace

double smallest_eigenvalue(const SquareMatrix& m) {
  switch (m.dim()) {
    case 1:
      return m(0, 0);
    case 2: {
      const double tr = m(0, 0) + m(1, 1);
      const double dif = m(0, 0) - m(1, 1);
      const double disc =
          std::sqrt(dif * dif + 4.0 * m(0, 1) * m(1, 0));
      return 0.5 * (tr - disc);
    }
    case 3: {
      SquareMatrix a = m;
      a.symmetrize();
      const double scale = std::max(a.max_abs(), 1e-300);
      for (int sweep = 0; sweep < 50; ++sweep) {
        if (jacobi_sweep(a) < 1e-14 * scale) break;
      }
      return std::min({a(0, 0), a(1, 1), a(2, 2)});
    }
    default:
      throw std::invalid_argument("smallest_eigenvalue: empty matrix");
  }
}

SquareMatrix congruence(const SquareMatrix& m, const SquareMatrix& j) {
  if (m.dim() != j.dim()) {
    throw std::invalid_argument("congruence: dimension mismatch");
  }
  const std::size_t n = m.dim();
  SquareMatrix r(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          acc += j(i, a) * m(i, k) * j(k, b);
      r(a, b) = acc;
    }
  }
  return r;
}

SquareMatrix correlation_from_covariance(const SquareMatrix& v) {
  const std::size_t n = v.dim();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(v(i, i) > 0.0)) {
      throw std::runtime_error(
          "correlation_from_covariance: non-positive variance entry");
    }
  }
  SquareMatrix r(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      r(i, k) = v(i, k) / std::sqrt(v(i, i) * v(k, k));
    }
  }
  return r;
}

}  // namespace evt
