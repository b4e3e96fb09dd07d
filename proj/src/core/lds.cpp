#include "core/lds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace xlab {

const char* structure_name(Structure s) {
  switch (s) {
    case Structure::General: return "general";
    case Structure::Symmetric: return "symmetric";
    case Structure::Diagonal: return "diagonal";
  }
  return "general";
}

Structure structure_from_name(const std::string& name) {
  if (name == "general") return Structure::General;
  if (name == "symmetric") return Structure::Symmetric;
  if (name == "diagonal") return Structure::Diagonal;
  fail(Errc::BadConfig, "unknown structure '" + name + "'");
}

void validate(const LinearRnnParams& theta) {
  const int d = theta.dim();
  if (d < 1) fail(Errc::BadConfig, "state dimension must be positive");
  if (theta.a.rows != d || theta.a.cols != d || static_cast<int>(theta.c.size()) != d)
    fail(Errc::BadConfig, "inconsistent parameter shapes");
  if (!all_finite(theta.a) || !all_finite(theta.b) || !all_finite(theta.c))
    fail(Errc::NonFinite, "parameters contain non-finite entries");
  if (theta.structure == Structure::Symmetric) {
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (theta.a(i, j) != theta.a(j, i)) fail(Errc::NotSymmetric, "a is not stored symmetric");
  }
  if (theta.structure == Structure::Diagonal) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j && theta.a(i, j) != 0.0)
          fail(Errc::NotDiagonal, "a has nonzero off-diagonal entries");
  }
}

bool is_balanced(const LinearRnnParams& theta, double tol) {
  for (int i = 0; i < theta.dim(); ++i)
    if (std::fabs(theta.b[i] - theta.c[i]) > tol) return false;
  return true;
}

ImpulseResponse impulse_response(const LinearRnnParams& theta, int n) {
  if (n < 1) fail(Errc::BadConfig, "horizon must be >= 1");
  const int d = theta.dim();
  ImpulseResponse ir;
  ir.values.resize(n);
  Vec v = theta.b;
  Vec next(d);
  const bool diag = theta.structure == Structure::Diagonal;
  for (int j = 0; j < n; ++j) {
    double y = 0.0;
    for (int i = 0; i < d; ++i) y += theta.c[i] * v[i];
    if (!std::isfinite(y))
      fail(Errc::NonFinite, "impulse response overflowed at index " + std::to_string(j));
    ir.values[j] = y;
    if (j + 1 == n) break;
    if (diag) {
      for (int i = 0; i < d; ++i) v[i] *= theta.a(i, i);
    } else {
      matvec(theta.a, v.data(), next.data());
      v.swap(next);
    }
    for (int i = 0; i < d; ++i)
      if (!std::isfinite(v[i]))
        fail(Errc::NonFinite, "state overflowed at index " + std::to_string(j + 1));
  }
  return ir;
}

double rnn_forward_last(const LinearRnnParams& theta, const double* x, int k) {
  if (k < 1) fail(Errc::BadConfig, "sequence length must be >= 1");
  const int d = theta.dim();
  Vec s(d, 0.0);
  Vec next(d);
  const bool diag = theta.structure == Structure::Diagonal;
  for (int t = 0; t < k; ++t) {
    if (diag) {
      for (int i = 0; i < d; ++i) next[i] = theta.a(i, i) * s[i] + theta.b[i] * x[t];
    } else {
      matvec(theta.a, s.data(), next.data());
      for (int i = 0; i < d; ++i) next[i] += theta.b[i] * x[t];
    }
    s.swap(next);
    for (int i = 0; i < d; ++i)
      if (!std::isfinite(s[i])) fail(Errc::NonFinite, "state overflowed at step " + std::to_string(t));
  }
  double y = 0.0;
  for (int i = 0; i < d; ++i) y += theta.c[i] * s[i];
  if (!std::isfinite(y)) fail(Errc::NonFinite, "output is non-finite");
  return y;
}

double rnn_forward_last(const LinearRnnParams& theta, const Vec& x) {
  return rnn_forward_last(theta, x.data(), static_cast<int>(x.size()));
}

EigenSym jacobi_eigensym(const Mat& a_in) {
  const int n = a_in.rows;
  Mat a = a_in;
  Mat u = Mat::identity(n);

  auto off_frob = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_frob() > kJacobiOffTol) {
    if (++sweep > kJacobiMaxSweeps)
      fail(Errc::JacobiNoConvergence, "sweep limit exceeded");
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);
        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p);
            const double arq = a(r, q);
            a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
            a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
          }
          const double urp = u(r, p);
          const double urq = u(r, q);
          u(r, p) = urp - s * (urq + tau * urp);
          u(r, q) = urq + s * (urp - tau * urq);
        }
      }
    }
  }

  // Descending eigenvalue order, ties broken by original index.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a(i, i) > a(j, j); });

  EigenSym out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (int r = 0; r < n; ++r) out.vectors(r, k) = u(r, order[k]);
  }
  return out;
}

LinearRnnParams diagonalize_balanced(const LinearRnnParams& theta) {
  validate(theta);
  if (theta.structure == Structure::General)
    fail(Errc::NotSymmetric, "diagonalization requires a symmetric or diagonal system");
  if (!is_balanced(theta)) fail(Errc::NotBalanced, "system is not balanced within tolerance");

  const int d = theta.dim();
  if (theta.structure == Structure::Diagonal) {
    // Only reorder to the canonical descending convention.
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return theta.a(i, i) > theta.a(j, j); });
    LinearRnnParams out;
    out.structure = Structure::Diagonal;
    out.a = Mat(d, d);
    out.b.resize(d);
    out.c.resize(d);
    for (int k = 0; k < d; ++k) {
      out.a(k, k) = theta.a(order[k], order[k]);
      out.b[k] = theta.b[order[k]];
      out.c[k] = theta.c[order[k]];
    }
    return out;
  }

  const EigenSym eig = jacobi_eigensym(theta.a);
  LinearRnnParams out;
  out.structure = Structure::Diagonal;
  out.a = Mat::diag(eig.values);
  out.b = matvec_t(eig.vectors, theta.b);
  out.c = matvec_t(eig.vectors, theta.c);
  return out;
}

double balancedness_ratio(const LinearRnnParams& theta) {
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < theta.dim(); ++i) {
    const double diff = theta.b[i] - theta.c[i];
    const double sum = theta.b[i] + theta.c[i];
    num += diff * diff;
    den += sum * sum;
  }
  if (den == 0.0) fail(Errc::DegenerateDenominator, "|b + c| is zero");
  return std::sqrt(num) / std::sqrt(den);
}

double norm_gap(const LinearRnnParams& theta) {
  return dot(theta.b, theta.b) - dot(theta.c, theta.c);
}

LinearRnnParams construct_nonextrapolating_student(const ImpulseResponse& teacher_prefix, int d,
                                                   const Vec& tail, const Vec& eigs) {
  const int k = teacher_prefix.horizon();
  if (d <= k) fail(Errc::BadConfig, "need d > k");
  if (static_cast<int>(tail.size()) != d - k) fail(Errc::BadConfig, "tail must have d - k entries");
  if (static_cast<int>(eigs.size()) != d) fail(Errc::BadConfig, "need d eigenvalues");
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (std::fabs(eigs[i] - eigs[j]) <= kDedupeTol)
        fail(Errc::BadConfig, "eigenvalues must be pairwise distinct");

  // Vandermonde system V g = r with V[j][i] = eigs[i]^j.
  Mat v(d, d);
  for (int i = 0; i < d; ++i) {
    double p = 1.0;
    for (int j = 0; j < d; ++j) {
      v(j, i) = p;
      p *= eigs[i];
    }
  }
  Vec r(d);
  for (int j = 0; j < k; ++j) r[j] = teacher_prefix.values[j];
  for (int j = k; j < d; ++j) r[j] = tail[j - k];

  Vec g;
  if (!solve_dense(v, r, g)) fail(Errc::IllConditionedVandermonde, "singular Vandermonde system");

  // One round of iterative refinement, then the residual gates success.
  Vec resid(d);
  matvec(v, g.data(), resid.data());
  for (int j = 0; j < d; ++j) resid[j] = r[j] - resid[j];
  Vec corr;
  if (solve_dense(v, resid, corr))
    for (int i = 0; i < d; ++i) g[i] += corr[i];
  matvec(v, g.data(), resid.data());
  double res_inf = 0.0;
  for (int j = 0; j < d; ++j) res_inf = std::max(res_inf, std::fabs(resid[j] - r[j]));
  if (!(res_inf <= kVandermondeTol))
    fail(Errc::IllConditionedVandermonde,
         "solve residual " + std::to_string(res_inf) + " exceeds tolerance");

  LinearRnnParams out;
  out.structure = Structure::Diagonal;
  out.a = Mat(d, d);
  out.b.resize(d);
  out.c.resize(d);
  for (int i = 0; i < d; ++i) {
    out.a(i, i) = eigs[i];
    const double root = std::sqrt(std::fabs(g[i]));
    out.b[i] = g[i] < 0 ? -root : root;
    out.c[i] = root;
  }
  return out;
}

ExtrapolationError extrapolation_error(const ImpulseResponse& student,
                                       const ImpulseResponse& teacher, int tail_start,
                                       int tail_end) {
  const int lim = std::min(student.horizon(), teacher.horizon());
  if (tail_start < 0 || tail_start >= tail_end || tail_end > lim)
    fail(Errc::WindowOutOfRange, "window [" + std::to_string(tail_start) + ", " +
                                     std::to_string(tail_end) + ") not covered by both responses");
  ExtrapolationError out;
  double teacher_max = 0.0;
  for (int j = tail_start; j < tail_end; ++j) {
    out.error = std::max(out.error, std::fabs(student.values[j] - teacher.values[j]));
    teacher_max = std::max(teacher_max, std::fabs(teacher.values[j]));
  }
  out.non_extrapolating = out.error > teacher_max;
  return out;
}

}  // namespace xlab
