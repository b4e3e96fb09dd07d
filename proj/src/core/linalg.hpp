#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace xlab {

using Vec = std::vector<double>;

// Dense row-major matrix. Everything in this project is small (d <= ~200),
// so plain loops beat any library dispatch overhead.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat diag(const Vec& d) {
    Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m.data[i * d.size() + i] = d[i];
    return m;
  }
};

// y = a * x
void matvec(const Mat& a, const double* x, double* y);
// y = a^T * x; for an exactly symmetric a this produces bitwise the same
// result as matvec (same summands in the same order).
void matvec_t(const Mat& a, const double* x, double* y);
Vec matvec(const Mat& a, const Vec& x);
Vec matvec_t(const Mat& a, const Vec& x);
Mat matmul(const Mat& a, const Mat& b);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);
double norm_inf(const Mat& a);
double frob(const Mat& a);

bool all_finite(const Vec& a);
bool all_finite(const Mat& a);

// Solves a*x = rhs in place by Gaussian elimination with partial pivoting.
// Returns false when a pivot falls below pivot_tol (treated as rank deficient).
bool solve_dense(Mat a, Vec rhs, Vec& x, double pivot_tol = 0.0);

uint64_t splitmix64(uint64_t& state);
// Expands a master seed into independent per-run seeds: seed #counter of the
// stream rooted at master. Documented counter scheme so parallel sweeps stay
// reproducible regardless of scheduling.
uint64_t derive_seed(uint64_t master, uint64_t counter);

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}
  double normal(double mean = 0.0, double stddev = 1.0) {
    std::normal_distribution<double> d(mean, stddev);
    return d(gen);
  }
  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(gen);
  }
};

}  // namespace xlab
