#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "hybridscribe/errors.hpp"

namespace hybridscribe {

using Vector = std::vector<double>;

// Dense row-major matrix of doubles. Minimal on purpose: the models in this
// repo are small and every consumer wants predictable summation order.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major, rows*cols entries

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  bool empty() const { return data.empty(); }
};

// Deterministic random source. The generator is std::mt19937_64, whose output
// sequence is fixed by the C++ standard, so identical seeds give identical
// draws on every platform. Derived draws are built only from raw 64-bit
// outputs with the documented recipes:
//   uniform():  (next() >> 11) * 2^-53, in [0, 1)
//   normal():   Box-Muller on (1 - uniform()] pairs, second value cached
//   below(n):   multiply-shift range reduction ((next() * n) >> 64)
class RngState {
 public:
  explicit RngState(std::uint64_t seed) : gen_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64() { return gen_(); }

  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Probabilities are clamped to [kProbEps, 1-kProbEps] before any log().
inline constexpr double kProbEps = 1e-12;

double clamp_prob(double p);

// Numerically stable logistic function; exact 0.5 at x = 0.
double sigmoid(double x);
Vector sigmoid(const Vector& x);

// log(1 + e^x) and log(sigmoid(x)), stable over the whole double range.
double softplus(double x);
double log_sigmoid(double x);

// -sum_i [t_i log p_i + (1-t_i) log(1-p_i)] with clamped probabilities.
double cross_entropy_loss(const Vector& pred, const Vector& target);

// Central differences (f(x+eps*e_i) - f(x-eps*e_i)) / (2*eps) per coordinate.
Vector finite_difference_gradient(const std::function<double(const Vector&)>& loss_fn,
                                  const Vector& params, double eps);

// Matrix/vector plumbing shared by the model modules. Summation order is the
// plain inner-loop order so tests can reproduce results exactly.
Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, const Vector& x);
Vector matvec_transposed(const Matrix& a, const Vector& x);  // a^T * x
void add_outer(Matrix& acc, const Vector& u, const Vector& v);  // acc += u v^T
void axpy(double alpha, const Vector& x, Vector& y);            // y += alpha*x
double dot(const Vector& a, const Vector& b);

Matrix gaussian_matrix(RngState& rng, std::size_t rows, std::size_t cols, double stddev);
Vector gaussian_vector(RngState& rng, std::size_t len, double stddev);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

// A model's parameters (or a same-shaped gradient/velocity) as an ordered
// list of tensor references. Every trainable model exposes one of these so
// the SGD loop and the gradient checker stay generic.
struct TensorRefs {
  std::vector<Matrix*> mats;
  std::vector<Vector*> vecs;
};
struct ConstTensorRefs {
  std::vector<const Matrix*> mats;
  std::vector<const Vector*> vecs;

  ConstTensorRefs() = default;
  ConstTensorRefs(const TensorRefs& r) {  // NOLINT: implicit by design
    for (auto* m : r.mats) mats.push_back(m);
    for (auto* v : r.vecs) vecs.push_back(v);
  }
};

std::size_t flat_size(const ConstTensorRefs& refs);
Vector flatten(const ConstTensorRefs& refs);
void unflatten(const Vector& flat, const TensorRefs& refs);
void fill_zero(const TensorRefs& refs);
void scale_tensors(const TensorRefs& refs, double factor);

// velocity <- momentum*velocity - lr*grad;  params <- params + velocity
void sgd_momentum_step(const TensorRefs& params, const ConstTensorRefs& grads,
                       const TensorRefs& velocity, double learning_rate, double momentum);

// Max over coordinates of |a_i - f_i| / max(1, |a_i|, |f_i|).
double max_relative_error(const Vector& analytic, const Vector& reference);

}  // namespace hybridscribe
