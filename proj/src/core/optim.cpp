#include "core/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/log.hpp"

namespace xlab {

const char* method_name(Method m) {
  switch (m) {
    case Method::GD: return "gd";
    case Method::GF: return "gf";
    case Method::Adam: return "adam";
  }
  return "adam";
}

Method method_from_name(const std::string& s) {
  if (s == "gd") return Method::GD;
  if (s == "gf") return Method::GF;
  if (s == "adam") return Method::Adam;
  fail(Errc::BadConfig, "unknown method '" + s + "'");
}

const char* loss_kind_name(LossKind k) {
  switch (k) {
    case LossKind::Population: return "population";
    case LossKind::Empirical: return "empirical";
    case LossKind::Accumulating: return "accumulating";
  }
  return "population";
}

LossKind loss_kind_from_name(const std::string& s) {
  if (s == "population") return LossKind::Population;
  if (s == "empirical") return LossKind::Empirical;
  if (s == "accumulating") return LossKind::Accumulating;
  fail(Errc::BadConfig, "unknown loss kind '" + s + "'");
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "converged";
    case StopReason::MaxSteps: return "max_steps";
    case StopReason::Diverged: return "diverged";
  }
  return "max_steps";
}

double lr_schedule_apply(const TrainingConfig& config, int step) {
  double lr = config.lr;
  for (const auto& [at, mult] : config.lr_milestones)
    if (step >= at) lr *= mult;
  return lr;
}

void AdamState::step(Vec& x, const Vec& g, double lr) {
  ++t;
  const double c1 = 1.0 - std::pow(beta1, t);
  const double c2 = 1.0 - std::pow(beta2, t);
  for (size_t i = 0; i < x.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
    x[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
  }
}

namespace {

constexpr double kDivergedLoss = 1e12;
constexpr double kDivergedParam = 1e6;
constexpr double kGfDriftTol = 1e-6;

struct Problem {
  const TrainingConfig* cfg;
  const TrainTarget* target;
  int batches = 1;  // number of contiguous batch windows per epoch

  double full_loss(const LinearRnnParams& th) const {
    switch (cfg->loss_kind) {
      case LossKind::Population: return population_loss(th, *target->teacher_ir);
      case LossKind::Accumulating: return accumulating_loss(th, *target->teacher_ir);
      case LossKind::Empirical: return empirical_loss(th, *target->data);
    }
    return 0.0;
  }

  // Gradient (and matching loss) at the window used by this step index.
  Gradients grad(const LinearRnnParams& th, int step_index, double* batch_loss) const {
    switch (cfg->loss_kind) {
      case LossKind::Population:
        if (batch_loss) *batch_loss = population_loss(th, *target->teacher_ir);
        return population_grad(th, *target->teacher_ir);
      case LossKind::Accumulating:
        if (batch_loss) *batch_loss = accumulating_loss(th, *target->teacher_ir);
        return accumulating_grad(th, *target->teacher_ir);
      case LossKind::Empirical: {
        const SequenceDataset& data = *target->data;
        const int n = data.n();
        const int b = cfg->batch_size;
        if (b <= 0 || b >= n) {
          if (batch_loss) *batch_loss = empirical_loss(th, data);
          return empirical_grad(th, data);
        }
        const int begin = (step_index % batches) * b;
        const int end = std::min(begin + b, n);
        if (batch_loss) *batch_loss = empirical_loss_range(th, data, begin, end);
        return empirical_grad_range(th, data, begin, end);
      }
    }
    fail(Errc::BadConfig, "bad loss kind");
  }
};

double guarded_balancedness(const LinearRnnParams& th) {
  try {
    return balancedness_ratio(th);
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

TrainingTrajectory train(const TrainTarget& target, const LinearRnnParams& student_init,
                         const TrainingConfig& config) {
  if (config.max_steps < 1) fail(Errc::BadConfig, "max_steps must be >= 1");
  if (config.record_every < 1) fail(Errc::BadConfig, "record_every must be >= 1");
  if (config.method == Method::GF) {
    if (!(config.gf_step > 0)) fail(Errc::BadConfig, "gf_step must be positive");
  } else {
    if (!(config.lr > 0)) fail(Errc::BadConfig, "lr must be positive");
  }
  for (size_t i = 1; i < config.lr_milestones.size(); ++i)
    if (config.lr_milestones[i].first <= config.lr_milestones[i - 1].first)
      fail(Errc::BadConfig, "milestones must be strictly increasing");
  const bool empirical = config.loss_kind == LossKind::Empirical;
  if (empirical && !target.data) fail(Errc::BadConfig, "empirical loss needs a dataset");
  if (!empirical && !target.teacher_ir)
    fail(Errc::BadConfig, "impulse-matching losses need a teacher impulse response");
  validate(student_init);

  Problem prob{&config, &target};
  if (empirical && config.batch_size > 0 && config.batch_size < target.data->n())
    prob.batches = (target.data->n() + config.batch_size - 1) / config.batch_size;

  const double stop_loss =
      config.early_stop_loss >= 0 ? config.early_stop_loss : (empirical ? 1e-8 : 1e-12);

  TrainingTrajectory traj;
  LinearRnnParams theta = student_init;
  Vec x = pack_free(theta);
  LinearRnnParams scratch = theta;

  AdamState adam(config.method == Method::Adam ? x.size() : 0);
  double gf_h = config.gf_step;
  bool gf_halved = false;
  double tau = 0.0;

  const double gap0 = norm_gap(theta);
  const bool balanced_start = guarded_balancedness(theta) <= 1e-12;

  auto grad_free = [&](const Vec& at, int step_index, double* batch_loss) {
    unpack_free(scratch, at);
    const Gradients g = prob.grad(scratch, step_index, batch_loss);
    return pack_grad_free(scratch, g);
  };

  auto push_record = [&](int step, double loss, double gnorm) {
    unpack_free(theta, x);
    TrajectoryRecord rec;
    rec.step = step;
    rec.tau = tau;
    rec.loss = loss;
    rec.balancedness = guarded_balancedness(theta);
    rec.norm_gap = norm_gap(theta);
    rec.grad_norm = gnorm;
    traj.records.push_back(rec);
  };

  double step_loss = prob.full_loss(theta);
  {
    double ignored = 0.0;
    const Vec g0 = grad_free(x, 0, &ignored);
    push_record(0, step_loss, norm2(g0));
  }
  if (step_loss <= stop_loss) {
    traj.stop_reason = StopReason::Converged;
    traj.final_theta = theta;
    traj.steps_taken = 0;
    traj.final_loss = step_loss;
    return traj;
  }

  traj.stop_reason = StopReason::MaxSteps;
  double last_gnorm = 0.0;
  double last_finite_loss = step_loss;

  Vec k1, k2, k3, k4, probe;
  int step = 0;
  while (step < config.max_steps) {
    ++step;
    double batch_loss = 0.0;

    if (config.method == Method::GF) {
      // Classical RK4 on the negative gradient field.
      k1 = grad_free(x, step - 1, &batch_loss);
      probe = x;
      for (size_t i = 0; i < x.size(); ++i) probe[i] = x[i] - 0.5 * gf_h * k1[i];
      k2 = grad_free(probe, step - 1, nullptr);
      for (size_t i = 0; i < x.size(); ++i) probe[i] = x[i] - 0.5 * gf_h * k2[i];
      k3 = grad_free(probe, step - 1, nullptr);
      for (size_t i = 0; i < x.size(); ++i) probe[i] = x[i] - gf_h * k3[i];
      k4 = grad_free(probe, step - 1, nullptr);
      for (size_t i = 0; i < x.size(); ++i)
        x[i] -= gf_h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      tau += gf_h;
      last_gnorm = norm2(k1);
    } else {
      const Vec g = grad_free(x, step - 1, &batch_loss);
      const double lr = lr_schedule_apply(config, step - 1);
      if (config.method == Method::GD) {
        for (size_t i = 0; i < x.size(); ++i) x[i] -= lr * g[i];
      } else {
        adam.step(x, g, lr);
      }
      last_gnorm = norm2(g);
    }

    // Divergence guard: abort before anything non-finite lands in a record.
    bool diverged = false;
    for (double v : x)
      if (!std::isfinite(v) || std::fabs(v) > kDivergedParam) diverged = true;
    double cur = std::numeric_limits<double>::quiet_NaN();
    if (!diverged) {
      unpack_free(theta, x);
      try {
        cur = empirical ? ((config.batch_size > 0 && config.batch_size < target.data->n())
                               ? batch_loss
                               : prob.full_loss(theta))
                        : prob.full_loss(theta);
      } catch (const Error&) {
        diverged = true;
      }
      if (!diverged && (!std::isfinite(cur) || cur > kDivergedLoss)) diverged = true;
    }
    if (diverged) {
      traj.stop_reason = StopReason::Diverged;
      if (std::isfinite(cur) && cur <= kDivergedLoss) last_finite_loss = cur;
      break;
    }
    last_finite_loss = cur;

    const bool cheap_trigger = cur <= stop_loss;
    const bool at_record = step % config.record_every == 0 || step == config.max_steps;
    if (at_record || cheap_trigger) {
      const double full = (empirical && config.batch_size > 0) ? prob.full_loss(theta) : cur;
      push_record(step, full, last_gnorm);
      last_finite_loss = full;
      if (full <= stop_loss) {
        traj.stop_reason = StopReason::Converged;
        break;
      }
      if (config.method == Method::GF && !gf_halved) {
        const bool gap_drift = std::fabs(norm_gap(theta) - gap0) > kGfDriftTol;
        const bool bal_drift = balanced_start && guarded_balancedness(theta) > kGfDriftTol;
        if (gap_drift || bal_drift) {
          gf_h *= 0.5;
          gf_halved = true;
          log_info("gf step halved to ", gf_h, " after conservation drift at step ", step);
        }
      }
    }
  }

  unpack_free(theta, x);
  traj.final_theta = theta;
  traj.steps_taken = step;
  traj.final_loss = last_finite_loss;
  if (traj.records.empty() || traj.records.back().step != step) {
    if (std::isfinite(last_finite_loss)) push_record(step, last_finite_loss, last_gnorm);
  }
  return traj;
}

LinearRnnParams init_student(int d, InitKind kind, double scale, uint64_t seed,
                             Structure structure) {
  if (d < 1) fail(Errc::BadConfig, "dimension must be >= 1");
  if (kind == InitKind::Explicit)
    fail(Errc::BadConfig, "explicit init carries its own parameters");
  LinearRnnParams theta;
  theta.structure = structure;
  theta.a = Mat(d, d);
  theta.b.assign(d, 0.0);
  theta.c.assign(d, 0.0);
  Rng rng(seed);

  const int a_free = structure == Structure::General ? d * d
                     : structure == Structure::Symmetric ? d * (d + 1) / 2
                                                         : d;
  const double a_std = scale / std::sqrt(static_cast<double>(a_free));
  const double v_std = scale / std::sqrt(static_cast<double>(d));

  switch (structure) {
    case Structure::General:
      for (double& v : theta.a.data) v = rng.normal(0.0, a_std);
      break;
    case Structure::Symmetric:
      for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) theta.a(i, j) = theta.a(j, i) = rng.normal(0.0, a_std);
      break;
    case Structure::Diagonal:
      for (int i = 0; i < d; ++i) theta.a(i, i) = rng.normal(0.0, a_std);
      break;
  }
  for (int i = 0; i < d; ++i) theta.b[i] = rng.normal(0.0, v_std);
  if (kind == InitKind::BalancedRandom) {
    theta.c = theta.b;
  } else {
    for (int i = 0; i < d; ++i) theta.c[i] = rng.normal(0.0, v_std);
  }
  return theta;
}

}  // namespace xlab
