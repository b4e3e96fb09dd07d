#pragma once

#include <string>

#include "core/errors.hpp"
#include "core/linalg.hpp"

namespace xlab {

enum class Structure { General, Symmetric, Diagonal };

const char* structure_name(Structure s);
Structure structure_from_name(const std::string& name);

// SISO linear recurrence s_{t+1} = a s_t + b x_t, y_t = c . s_t.
// Symmetric params store a exactly symmetric (free variables are the upper
// triangle); Diagonal params store exact zeros off the diagonal.
struct LinearRnnParams {
  Mat a;
  Vec b;
  Vec c;
  Structure structure = Structure::General;

  int dim() const { return static_cast<int>(b.size()); }
};

// Checks shape consistency, finiteness, and the structural zero patterns.
void validate(const LinearRnnParams& theta);

struct ImpulseResponse {
  Vec values;
  int horizon() const { return static_cast<int>(values.size()); }
};

// Numeric knobs shared across modules.
inline constexpr double kTolBalance = 1e-9;
inline constexpr double kVandermondeTol = 1e-8;
inline constexpr double kJacobiOffTol = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kDedupeTol = 1e-8;
inline constexpr double kWeightTol = 1e-10;
inline constexpr double kCbZeroTol = 1e-12;

bool is_balanced(const LinearRnnParams& theta, double tol = kTolBalance);

// (c b, c a b, c a^2 b, ...) of length n via the state recurrence.
ImpulseResponse impulse_response(const LinearRnnParams& theta, int n);

// Last-step output for the length-k input x, via the state recurrence.
double rnn_forward_last(const LinearRnnParams& theta, const double* x, int k);
double rnn_forward_last(const LinearRnnParams& theta, const Vec& x);

// Symmetric eigenproblem via cyclic Jacobi rotations; eigenvalues returned in
// descending order (ties keep the original index order), vectors as columns.
struct EigenSym {
  Vec values;
  Mat vectors;
};
EigenSym jacobi_eigensym(const Mat& a);

// Rotates a balanced symmetric system into an equivalent balanced diagonal
// one (a' = eigenvalues, b' = U^T b, c' = U^T c). Diagonal input is only
// reordered.
LinearRnnParams diagonalize_balanced(const LinearRnnParams& theta);

// |b - c| / |b + c| in Euclidean norm.
double balancedness_ratio(const LinearRnnParams& theta);

// |b|^2 - |c|^2, conserved along gradient flow.
double norm_gap(const LinearRnnParams& theta);

// Diagonal student whose impulse response equals teacher_prefix on the first
// k indices and tail on indices k..d-1, built from a Vandermonde solve on the
// given (pairwise distinct) eigenvalues. Coefficients g split as
// b_i = sign(g_i) sqrt(|g_i|), c_i = sqrt(|g_i|).
LinearRnnParams construct_nonextrapolating_student(const ImpulseResponse& teacher_prefix, int d,
                                                   const Vec& tail, const Vec& eigs);

struct ExtrapolationError {
  double error = 0.0;
  // True when the error exceeds what the all-zero model would score on the
  // same window.
  bool non_extrapolating = false;
};
ExtrapolationError extrapolation_error(const ImpulseResponse& student,
                                       const ImpulseResponse& teacher, int tail_start,
                                       int tail_end);

// Default evaluation window for a model trained on length-k sequences.
inline int default_tail_end(int k) { return k * 4 > 200 ? k * 4 : 200; }

}  // namespace xlab
