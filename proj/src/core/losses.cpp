#include "core/losses.hpp"

#include <cmath>

namespace xlab {

namespace {

// Shared engine for the impulse-matching losses: sum_j w_j (c a^j b - t_j)^2
// with per-index weights w_j (1 for the plain loss, k-j for the accumulating
// one). Gradients are assembled from forward states u_j = a^j b, adjoint
// states v_j = (a^T)^j c, and a backward sweep for the transition matrix, so
// the cost stays O(k d^2).
double weighted_ir_loss(const LinearRnnParams& theta, const ImpulseResponse& teacher_ir,
                        bool accumulating) {
  const int k = teacher_ir.horizon();
  const ImpulseResponse ir = impulse_response(theta, k);
  double loss = 0.0;
  for (int j = 0; j < k; ++j) {
    const double r = ir.values[j] - teacher_ir.values[j];
    const double w = accumulating ? static_cast<double>(k - j) : 1.0;
    loss += w * r * r;
  }
  if (!std::isfinite(loss)) fail(Errc::NonFinite, "loss is non-finite");
  return loss;
}

void apply_structure(const LinearRnnParams& theta, Mat& ga) {
  const int d = theta.dim();
  if (theta.structure == Structure::Symmetric) {
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        const double s = 0.5 * (ga(i, j) + ga(j, i));
        ga(i, j) = ga(j, i) = s;
      }
  } else if (theta.structure == Structure::Diagonal) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j) ga(i, j) = 0.0;
  }
}

Gradients weighted_ir_grad(const LinearRnnParams& theta, const ImpulseResponse& teacher_ir,
                           bool accumulating) {
  const int k = teacher_ir.horizon();
  const int d = theta.dim();

  std::vector<Vec> u(k, Vec(d));
  u[0] = theta.b;
  for (int j = 1; j < k; ++j) matvec(theta.a, u[j - 1].data(), u[j].data());

  // Residuals scaled by d/dr of the square and the index weight.
  Vec rho(k);
  for (int j = 0; j < k; ++j) {
    double y = 0.0;
    for (int i = 0; i < d; ++i) y += theta.c[i] * u[j][i];
    const double w = accumulating ? static_cast<double>(k - j) : 1.0;
    rho[j] = 2.0 * w * (y - teacher_ir.values[j]);
    if (!std::isfinite(rho[j])) fail(Errc::NonFinite, "residual is non-finite");
  }

  Gradients g;
  g.a = Mat(d, d);
  g.b.assign(d, 0.0);
  g.c.assign(d, 0.0);

  // b and c gradients from matching forward sweeps. With a stored exactly
  // symmetric and b == c these accumulate bitwise-identical values, which the
  // conservation checks rely on.
  Vec v = theta.c;
  Vec tmp(d);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < d; ++i) {
      g.c[i] += rho[j] * u[j][i];
      g.b[i] += rho[j] * v[i];
    }
    if (j + 1 < k) {
      matvec_t(theta.a, v.data(), tmp.data());
      v.swap(tmp);
    }
  }

  // Backward adjoint sweep: lambda_i = rho_i c + a^T lambda_{i+1};
  // dL/da = sum_i lambda_{i+1} u_i^T.
  if (k > 1) {
    Vec lambda(d);
    for (int i = 0; i < d; ++i) lambda[i] = rho[k - 1] * theta.c[i];
    for (int i = k - 2; i >= 0; --i) {
      for (int r = 0; r < d; ++r) {
        const double lr = lambda[r];
        if (lr == 0.0) continue;
        double* row = g.a.data.data() + static_cast<size_t>(r) * d;
        const double* ui = u[i].data();
        for (int q = 0; q < d; ++q) row[q] += lr * ui[q];
      }
      if (i > 0) {
        matvec_t(theta.a, lambda.data(), tmp.data());
        for (int r = 0; r < d; ++r) lambda[r] = tmp[r] + rho[i] * theta.c[r];
      }
    }
  }

  apply_structure(theta, g.a);
  if (!all_finite(g.a) || !all_finite(g.b) || !all_finite(g.c))
    fail(Errc::NonFinite, "gradient is non-finite");
  return g;
}

}  // namespace

double population_loss(const LinearRnnParams& theta, const ImpulseResponse& teacher_ir) {
  return weighted_ir_loss(theta, teacher_ir, false);
}

Gradients population_grad(const LinearRnnParams& theta, const ImpulseResponse& teacher_ir) {
  return weighted_ir_grad(theta, teacher_ir, false);
}

double accumulating_loss(const LinearRnnParams& theta, const ImpulseResponse& teacher_ir) {
  return weighted_ir_loss(theta, teacher_ir, true);
}

Gradients accumulating_grad(const LinearRnnParams& theta, const ImpulseResponse& teacher_ir) {
  return weighted_ir_grad(theta, teacher_ir, true);
}

double empirical_loss_range(const LinearRnnParams& theta, const SequenceDataset& data,
                            int row_begin, int row_end) {
  if (row_begin < 0 || row_end <= row_begin || row_end > data.n())
    fail(Errc::BadConfig, "bad row range");
  const int k = data.k();
  double loss = 0.0;
  for (int r = row_begin; r < row_end; ++r) {
    const double* x = data.inputs.data.data() + static_cast<size_t>(r) * k;
    const double e = rnn_forward_last(theta, x, k) - data.labels[r];
    loss += e * e;
  }
  loss /= static_cast<double>(row_end - row_begin);
  if (!std::isfinite(loss)) fail(Errc::NonFinite, "loss is non-finite");
  return loss;
}

double empirical_loss(const LinearRnnParams& theta, const SequenceDataset& data) {
  if (data.n() < 1) fail(Errc::BadConfig, "empty dataset");
  return empirical_loss_range(theta, data, 0, data.n());
}

Gradients empirical_grad_range(const LinearRnnParams& theta, const SequenceDataset& data,
                               int row_begin, int row_end) {
  if (row_begin < 0 || row_end <= row_begin || row_end > data.n())
    fail(Errc::BadConfig, "bad row range");
  const int k = data.k();
  const int d = theta.dim();
  const double inv_n = 1.0 / static_cast<double>(row_end - row_begin);

  Gradients g;
  g.a = Mat(d, d);
  g.b.assign(d, 0.0);
  g.c.assign(d, 0.0);

  std::vector<Vec> s(k + 1, Vec(d));
  Vec shat(d), tmp(d), lambda(d);

  for (int row = row_begin; row < row_end; ++row) {
    const double* x = data.inputs.data.data() + static_cast<size_t>(row) * k;

    // Forward states s_{t+1} = a s_t + b x_t and the mirrored input path
    // shat_{t+1} = a^T shat_t + c x_t (used for the b gradient so that the
    // balanced case keeps b and c gradients bitwise equal).
    std::fill(s[0].begin(), s[0].end(), 0.0);
    std::fill(shat.begin(), shat.end(), 0.0);
    for (int t = 0; t < k; ++t) {
      matvec(theta.a, s[t].data(), s[t + 1].data());
      for (int i = 0; i < d; ++i) s[t + 1][i] += theta.b[i] * x[t];
      matvec_t(theta.a, shat.data(), tmp.data());
      for (int i = 0; i < d; ++i) shat[i] = tmp[i] + theta.c[i] * x[t];
    }
    double y = 0.0;
    for (int i = 0; i < d; ++i) y += theta.c[i] * s[k][i];
    if (!std::isfinite(y)) fail(Errc::NonFinite, "forward output is non-finite");
    const double rho = 2.0 * inv_n * (y - data.labels[row]);

    for (int i = 0; i < d; ++i) {
      g.c[i] += rho * s[k][i];
      g.b[i] += rho * shat[i];
    }

    // Backward sweep for the transition matrix.
    for (int i = 0; i < d; ++i) lambda[i] = rho * theta.c[i];
    for (int t = k - 1; t >= 0; --t) {
      for (int r = 0; r < d; ++r) {
        const double lr = lambda[r];
        if (lr == 0.0) continue;
        double* grow = g.a.data.data() + static_cast<size_t>(r) * d;
        const double* st = s[t].data();
        for (int q = 0; q < d; ++q) grow[q] += lr * st[q];
      }
      if (t > 0) {
        matvec_t(theta.a, lambda.data(), tmp.data());
        lambda.swap(tmp);
      }
    }
  }

  apply_structure(theta, g.a);
  if (!all_finite(g.a) || !all_finite(g.b) || !all_finite(g.c))
    fail(Errc::NonFinite, "gradient is non-finite");
  return g;
}

Gradients empirical_grad(const LinearRnnParams& theta, const SequenceDataset& data) {
  if (data.n() < 1) fail(Errc::BadConfig, "empty dataset");
  return empirical_grad_range(theta, data, 0, data.n());
}

SequenceDataset make_dataset(const LinearRnnParams& teacher, int k, int n, uint64_t seed) {
  if (n < 1 || k < 1) fail(Errc::BadConfig, "need n >= 1 and k >= 1");
  SequenceDataset data;
  data.inputs = Mat(n, k);
  data.labels.resize(n);
  Rng rng(seed);
  for (double& v : data.inputs.data) v = rng.normal();
  for (int r = 0; r < n; ++r) {
    const double* x = data.inputs.data.data() + static_cast<size_t>(r) * k;
    data.labels[r] = rnn_forward_last(teacher, x, k);
  }
  return data;
}

int free_param_count(const LinearRnnParams& theta) {
  const int d = theta.dim();
  switch (theta.structure) {
    case Structure::General: return d * d + 2 * d;
    case Structure::Symmetric: return d * (d + 1) / 2 + 2 * d;
    case Structure::Diagonal: return 3 * d;
  }
  return 0;
}

Vec pack_free(const LinearRnnParams& theta) {
  const int d = theta.dim();
  Vec x;
  x.reserve(free_param_count(theta));
  switch (theta.structure) {
    case Structure::General:
      x.insert(x.end(), theta.a.data.begin(), theta.a.data.end());
      break;
    case Structure::Symmetric:
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) x.push_back(theta.a(i, j));
      break;
    case Structure::Diagonal:
      for (int i = 0; i < d; ++i) x.push_back(theta.a(i, i));
      break;
  }
  x.insert(x.end(), theta.b.begin(), theta.b.end());
  x.insert(x.end(), theta.c.begin(), theta.c.end());
  return x;
}

void unpack_free(LinearRnnParams& theta, const Vec& x) {
  const int d = theta.dim();
  size_t p = 0;
  switch (theta.structure) {
    case Structure::General:
      std::copy(x.begin(), x.begin() + static_cast<long>(d) * d, theta.a.data.begin());
      p = static_cast<size_t>(d) * d;
      break;
    case Structure::Symmetric:
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
          theta.a(i, j) = x[p];
          theta.a(j, i) = x[p];
          ++p;
        }
      break;
    case Structure::Diagonal:
      for (int i = 0; i < d; ++i) theta.a(i, i) = x[p++];
      break;
  }
  for (int i = 0; i < d; ++i) theta.b[i] = x[p++];
  for (int i = 0; i < d; ++i) theta.c[i] = x[p++];
}

Vec pack_grad_free(const LinearRnnParams& theta, const Gradients& g) {
  const int d = theta.dim();
  Vec x;
  x.reserve(free_param_count(theta));
  switch (theta.structure) {
    case Structure::General:
      x.insert(x.end(), g.a.data.begin(), g.a.data.end());
      break;
    case Structure::Symmetric:
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) x.push_back(i == j ? g.a(i, i) : g.a(i, j) + g.a(j, i));
      break;
    case Structure::Diagonal:
      for (int i = 0; i < d; ++i) x.push_back(g.a(i, i));
      break;
  }
  x.insert(x.end(), g.b.begin(), g.b.end());
  x.insert(x.end(), g.c.begin(), g.c.end());
  return x;
}

Gradients finite_diff_grad(const LossFn& loss, const LinearRnnParams& theta, double h) {
  if (h <= 0) fail(Errc::BadConfig, "step must be positive");
  LinearRnnParams work = theta;
  Vec x = pack_free(theta);
  Vec fd(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double x0 = x[i];
    x[i] = x0 + h;
    unpack_free(work, x);
    const double up = loss(work);
    x[i] = x0 - h;
    unpack_free(work, x);
    const double down = loss(work);
    x[i] = x0;
    fd[i] = (up - down) / (2.0 * h);
  }
  unpack_free(work, x);

  const int d = theta.dim();
  Gradients g;
  g.a = Mat(d, d);
  g.b.assign(d, 0.0);
  g.c.assign(d, 0.0);
  size_t p = 0;
  switch (theta.structure) {
    case Structure::General:
      std::copy(fd.begin(), fd.begin() + static_cast<long>(d) * d, g.a.data.begin());
      p = static_cast<size_t>(d) * d;
      break;
    case Structure::Symmetric:
      // Mirror back so the matrix compares against the symmetrized analytic
      // gradient: off-diagonal free derivative splits evenly.
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
          if (i == j) {
            g.a(i, i) = fd[p];
          } else {
            g.a(i, j) = g.a(j, i) = 0.5 * fd[p];
          }
          ++p;
        }
      break;
    case Structure::Diagonal:
      for (int i = 0; i < d; ++i) g.a(i, i) = fd[p++];
      break;
  }
  for (int i = 0; i < d; ++i) g.b[i] = fd[p++];
  for (int i = 0; i < d; ++i) g.c[i] = fd[p++];
  return g;
}

}  // namespace xlab
