#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "core/losses.hpp"

namespace xlab {

enum class Method { GD, GF, Adam };
enum class LossKind { Population, Empirical, Accumulating };
enum class InitKind { BalancedRandom, GaussianScaled, Explicit };

const char* method_name(Method m);
Method method_from_name(const std::string& s);
const char* loss_kind_name(LossKind k);
LossKind loss_kind_from_name(const std::string& s);

struct TrainingConfig {
  Method method = Method::Adam;
  double lr = 1e-3;       // GD and Adam
  double gf_step = 1e-3;  // GF integration step
  int max_steps = 15000;
  LossKind loss_kind = LossKind::Population;
  // Negative means "default for the loss kind": 1e-12 for impulse-matching
  // losses, 1e-8 for the empirical one.
  double early_stop_loss = -1.0;
  std::vector<std::pair<int, double>> lr_milestones;  // (step, multiplier)
  int batch_size = 0;  // 0 = full batch (empirical loss only)
  InitKind init = InitKind::BalancedRandom;
  double init_scale = 1e-3;
  std::optional<LinearRnnParams> init_explicit;
  uint64_t seed = 0;
  int record_every = 100;
};

struct TrajectoryRecord {
  int step = 0;
  double tau = 0.0;  // integrated time, GF only
  double loss = 0.0;
  double balancedness = 0.0;
  double norm_gap = 0.0;
  double grad_norm = 0.0;
};

enum class StopReason { Converged, MaxSteps, Diverged };
const char* stop_reason_name(StopReason r);

struct TrainingTrajectory {
  std::vector<TrajectoryRecord> records;
  LinearRnnParams final_theta;
  StopReason stop_reason = StopReason::MaxSteps;
  int steps_taken = 0;
  double final_loss = 0.0;
};

// Exactly one of the two targets is set: impulse-matching losses train
// against the teacher's impulse response, the empirical loss against a
// dataset.
struct TrainTarget {
  const ImpulseResponse* teacher_ir = nullptr;
  const SequenceDataset* data = nullptr;
};

TrainingTrajectory train(const TrainTarget& target, const LinearRnnParams& student_init,
                         const TrainingConfig& config);

// Fresh student parameters. BalancedRandom draws b, mirrors c = b and fills a
// per structure; GaussianScaled draws every free entry N(0, scale^2 / m) with
// m the owning block's free length.
LinearRnnParams init_student(int d, InitKind kind, double scale, uint64_t seed,
                             Structure structure = Structure::Symmetric);

// Multiplicative decay: lr times the product of multipliers of all milestones
// with milestone step <= step.
double lr_schedule_apply(const TrainingConfig& config, int step);

// Generic Adam state over a flat parameter vector (also used by the GRU
// trainer).
struct AdamState {
  Vec m, v;
  int t = 0;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  explicit AdamState(size_t n) : m(n, 0.0), v(n, 0.0) {}
  void step(Vec& x, const Vec& g, double lr);
};

}  // namespace xlab
