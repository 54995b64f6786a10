#include "hybridscribe/numeric.hpp"

#include <cmath>

namespace hybridscribe {

double clamp_prob(double p) {
  if (p < kProbEps) return kProbEps;
  if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
  return p;
}

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

Vector sigmoid(const Vector& x) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = sigmoid(x[i]);
  return out;
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double log_sigmoid(double x) { return -softplus(-x); }

double cross_entropy_loss(const Vector& pred, const Vector& target) {
  if (pred.size() != target.size()) {
    throw dim_error("cross_entropy_loss: pred length " + std::to_string(pred.size()) +
                    " != target length " + std::to_string(target.size()));
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    double p = clamp_prob(pred[i]);
    loss -= target[i] * std::log(p) + (1.0 - target[i]) * std::log(1.0 - p);
  }
  return loss;
}

Vector finite_difference_gradient(const std::function<double(const Vector&)>& loss_fn,
                                  const Vector& params, double eps) {
  Vector grad(params.size());
  Vector probe = params;
  for (std::size_t i = 0; i < params.size(); ++i) {
    probe[i] = params[i] + eps;
    double hi = loss_fn(probe);
    probe[i] = params[i] - eps;
    double lo = loss_fn(probe);
    probe[i] = params[i];
    grad[i] = (hi - lo) / (2.0 * eps);
  }
  return grad;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) {
    throw dim_error("matmul: inner dimensions " + std::to_string(a.cols) + " vs " +
                    std::to_string(b.rows));
  }
  Matrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += a.at(i, k) * b.at(k, j);
      out.at(i, j) = s;
    }
  }
  return out;
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols != x.size()) {
    throw dim_error("matvec: matrix cols " + std::to_string(a.cols) + " vs vector length " +
                    std::to_string(x.size()));
  }
  Vector out(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    double s = 0.0;
    const double* row = a.data.data() + i * a.cols;
    for (std::size_t k = 0; k < a.cols; ++k) s += row[k] * x[k];
    out[i] = s;
  }
  return out;
}

Vector matvec_transposed(const Matrix& a, const Vector& x) {
  if (a.rows != x.size()) {
    throw dim_error("matvec_transposed: matrix rows " + std::to_string(a.rows) +
                    " vs vector length " + std::to_string(x.size()));
  }
  Vector out(a.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* row = a.data.data() + i * a.cols;
    double xi = x[i];
    for (std::size_t k = 0; k < a.cols; ++k) out[k] += row[k] * xi;
  }
  return out;
}

void add_outer(Matrix& acc, const Vector& u, const Vector& v) {
  if (acc.rows != u.size() || acc.cols != v.size()) {
    throw dim_error("add_outer: acc is " + std::to_string(acc.rows) + "x" +
                    std::to_string(acc.cols) + ", operands " + std::to_string(u.size()) + "/" +
                    std::to_string(v.size()));
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    double ui = u[i];
    double* row = acc.data.data() + i * acc.cols;
    for (std::size_t j = 0; j < v.size(); ++j) row[j] += ui * v[j];
  }
}

void axpy(double alpha, const Vector& x, Vector& y) {
  if (x.size() != y.size()) {
    throw dim_error("axpy: lengths " + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw dim_error("dot: lengths " + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Matrix gaussian_matrix(RngState& rng, std::size_t rows, std::size_t cols, double stddev) {
  Matrix m(rows, cols);
  for (double& v : m.data) v = rng.normal() * stddev;
  return m;
}

Vector gaussian_vector(RngState& rng, std::size_t len, double stddev) {
  Vector v(len);
  for (double& x : v) x = rng.normal() * stddev;
  return v;
}

bool all_finite(const Vector& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

bool all_finite(const Matrix& m) { return all_finite(m.data); }

std::size_t flat_size(const ConstTensorRefs& refs) {
  std::size_t n = 0;
  for (const auto* m : refs.mats) n += m->data.size();
  for (const auto* v : refs.vecs) n += v->size();
  return n;
}

Vector flatten(const ConstTensorRefs& refs) {
  Vector out;
  out.reserve(flat_size(refs));
  for (const auto* m : refs.mats) out.insert(out.end(), m->data.begin(), m->data.end());
  for (const auto* v : refs.vecs) out.insert(out.end(), v->begin(), v->end());
  return out;
}

void unflatten(const Vector& flat, const TensorRefs& refs) {
  std::size_t pos = 0;
  for (auto* m : refs.mats) {
    if (pos + m->data.size() > flat.size()) throw dim_error("unflatten: flat vector too short");
    std::copy(flat.begin() + static_cast<long>(pos),
              flat.begin() + static_cast<long>(pos + m->data.size()), m->data.begin());
    pos += m->data.size();
  }
  for (auto* v : refs.vecs) {
    if (pos + v->size() > flat.size()) throw dim_error("unflatten: flat vector too short");
    std::copy(flat.begin() + static_cast<long>(pos),
              flat.begin() + static_cast<long>(pos + v->size()), v->begin());
    pos += v->size();
  }
  if (pos != flat.size()) throw dim_error("unflatten: flat vector too long");
}

void fill_zero(const TensorRefs& refs) {
  for (auto* m : refs.mats) std::fill(m->data.begin(), m->data.end(), 0.0);
  for (auto* v : refs.vecs) std::fill(v->begin(), v->end(), 0.0);
}

void scale_tensors(const TensorRefs& refs, double factor) {
  for (auto* m : refs.mats) {
    for (double& x : m->data) x *= factor;
  }
  for (auto* v : refs.vecs) {
    for (double& x : *v) x *= factor;
  }
}

void sgd_momentum_step(const TensorRefs& params, const ConstTensorRefs& grads,
                       const TensorRefs& velocity, double learning_rate, double momentum) {
  if (params.mats.size() != grads.mats.size() || params.mats.size() != velocity.mats.size() ||
      params.vecs.size() != grads.vecs.size() || params.vecs.size() != velocity.vecs.size()) {
    throw dim_error("sgd_momentum_step: tensor list shapes disagree");
  }
  for (std::size_t i = 0; i < params.mats.size(); ++i) {
    auto& p = params.mats[i]->data;
    const auto& g = grads.mats[i]->data;
    auto& v = velocity.mats[i]->data;
    for (std::size_t k = 0; k < p.size(); ++k) {
      v[k] = momentum * v[k] - learning_rate * g[k];
      p[k] += v[k];
    }
  }
  for (std::size_t i = 0; i < params.vecs.size(); ++i) {
    auto& p = *params.vecs[i];
    const auto& g = *grads.vecs[i];
    auto& v = *velocity.vecs[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      v[k] = momentum * v[k] - learning_rate * g[k];
      p[k] += v[k];
    }
  }
}

double max_relative_error(const Vector& analytic, const Vector& reference) {
  if (analytic.size() != reference.size()) {
    throw dim_error("max_relative_error: lengths differ");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    double denom = std::max({1.0, std::fabs(analytic[i]), std::fabs(reference[i])});
    worst = std::max(worst, std::fabs(analytic[i] - reference[i]) / denom);
  }
  return worst;
}

}  // namespace hybridscribe
