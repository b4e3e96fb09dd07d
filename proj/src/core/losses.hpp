#pragma once

#include <functional>

#include "core/lds.hpp"

namespace xlab {

// Length-k input rows with last-step teacher labels.
struct SequenceDataset {
  Mat inputs;  // n x k
  Vec labels;  // n

  int k() const { return inputs.cols; }
  int n() const { return inputs.rows; }
};

// Gradients in parameter shape. For Symmetric structure a holds the
// symmetrized matrix (g + g^T)/2; the free-variable derivative is then
// a[i][j] + a[j][i] for i < j and a[i][i] on the diagonal. For Diagonal
// structure the off-diagonal entries are zero.
struct Gradients {
  Mat a;
  Vec b;
  Vec c;
};

double population_loss(const LinearRnnParams& theta, const ImpulseResponse& teacher_ir);
Gradients population_grad(const LinearRnnParams& theta, const ImpulseResponse& teacher_ir);

double accumulating_loss(const LinearRnnParams& theta, const ImpulseResponse& teacher_ir);
Gradients accumulating_grad(const LinearRnnParams& theta, const ImpulseResponse& teacher_ir);

double empirical_loss(const LinearRnnParams& theta, const SequenceDataset& data);
Gradients empirical_grad(const LinearRnnParams& theta, const SequenceDataset& data);
// Row range [row_begin, row_end) with the same 1/N normalization as the full
// batch, N being the range size.
Gradients empirical_grad_range(const LinearRnnParams& theta, const SequenceDataset& data,
                               int row_begin, int row_end);
double empirical_loss_range(const LinearRnnParams& theta, const SequenceDataset& data,
                            int row_begin, int row_end);

// Gaussian inputs, labels from the teacher's last-step output. Deterministic
// under seed.
SequenceDataset make_dataset(const LinearRnnParams& teacher, int k, int n, uint64_t seed);

// --- free-parameter view -------------------------------------------------
// General: row-major a, then b, then c. Symmetric: upper triangle of a
// (row-major, i <= j), then b, then c. Diagonal: diag(a), then b, then c.

int free_param_count(const LinearRnnParams& theta);
Vec pack_free(const LinearRnnParams& theta);
void unpack_free(LinearRnnParams& theta, const Vec& x);
Vec pack_grad_free(const LinearRnnParams& theta, const Gradients& g);

// Central finite differences over the free parameters.
using LossFn = std::function<double(const LinearRnnParams&)>;
Gradients finite_diff_grad(const LossFn& loss, const LinearRnnParams& theta, double h = 1e-6);

}  // namespace xlab
