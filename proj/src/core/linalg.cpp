#include "core/linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace xlab {

void matvec(const Mat& a, const double* x, double* y) {
  for (int i = 0; i < a.rows; ++i) {
    const double* row = a.data.data() + static_cast<size_t>(i) * a.cols;
    double s = 0.0;
    for (int j = 0; j < a.cols; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void matvec_t(const Mat& a, const double* x, double* y) {
  for (int i = 0; i < a.cols; ++i) {
    double s = 0.0;
    for (int j = 0; j < a.rows; ++j) s += a.data[static_cast<size_t>(j) * a.cols + i] * x[j];
    y[i] = s;
  }
}

Vec matvec(const Mat& a, const Vec& x) {
  Vec y(a.rows);
  matvec(a, x.data(), y.data());
  return y;
}

Vec matvec_t(const Mat& a, const Vec& x) {
  Vec y(a.cols);
  matvec_t(a, x.data(), y.data());
  return y;
}

Mat matmul(const Mat& a, const Mat& b) {
  Mat c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

double norm_inf(const Mat& a) {
  double m = 0.0;
  for (double v : a.data) m = std::max(m, std::fabs(v));
  return m;
}

double frob(const Mat& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

bool all_finite(const Mat& a) {
  for (double v : a.data)
    if (!std::isfinite(v)) return false;
  return true;
}

bool solve_dense(Mat a, Vec rhs, Vec& x, double pivot_tol) {
  const int n = a.rows;
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::fabs(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double v = std::fabs(a(r, col));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best <= pivot_tol) return false;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(rhs[col], rhs[piv]);
    }
    const double inv = 1.0 / a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) * inv;
      if (f == 0.0) continue;
      a(r, col) = 0.0;
      for (int j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
      rhs[r] -= f * rhs[col];
    }
  }
  x.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return true;
}

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t derive_seed(uint64_t master, uint64_t counter) {
  uint64_t state = master + counter * 0x9E3779B97F4A7C15ULL;
  return splitmix64(state);
}

}  // namespace xlab
