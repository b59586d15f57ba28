// SPDX-License-Identifier: Apache-2.0
#include "radlab/tensor.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace radlab {

size_t shape_numel(const std::vector<int>& shape) {
  size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw std::invalid_argument("tensor: negative dimension");
    n *= static_cast<size_t>(d);
  }
  return n;
}

TensorF::TensorF(std::vector<int> s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
  if (data.size() != shape_numel(shape)) {
    throw std::invalid_argument("tensor: data length does not match shape " + shape_str());
  }
}

TensorF TensorF::zeros(std::vector<int> shape) {
  TensorF t;
  t.data.assign(shape_numel(shape), 0.0);
  t.shape = std::move(shape);
  return t;
}

TensorF TensorF::full(std::vector<int> shape, double value) {
  TensorF t = zeros(std::move(shape));
  t.fill(value);
  return t;
}

TensorF TensorF::gaussian(std::vector<int> shape, Rng& rng, double std, double mean) {
  TensorF t = zeros(std::move(shape));
  for (double& v : t.data) v = rng.gaussian(mean, std);
  return t;
}

bool TensorF::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void TensorF::fill(double v) {
  for (double& x : data) x = v;
}

double TensorF::item() const {
  if (data.size() != 1) throw std::invalid_argument("tensor: item() on non-scalar " + shape_str());
  return data[0];
}

std::string TensorF::shape_str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape.size(); ++i) os << (i ? "x" : "") << shape[i];
  os << "]";
  return os.str();
}

void require_finite(const TensorF& t, const char* what) {
  if (!t.all_finite()) throw std::runtime_error(std::string("non-finite values in ") + what);
}

namespace {
void check_2d(const TensorF& t, const char* name) {
  if (t.ndim() != 2) throw std::invalid_argument(std::string(name) + ": expected 2-D tensor, got " + t.shape_str());
}
}  // namespace

void gemm_nn(const TensorF& a, const TensorF& b, TensorF& c, bool accumulate) {
  check_2d(a, "gemm_nn");
  check_2d(b, "gemm_nn");
  const int m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) throw std::invalid_argument("gemm_nn: inner dims disagree " + a.shape_str() + " vs " + b.shape_str());
  if (c.shape != std::vector<int>{m, n}) c = TensorF::zeros({m, n});
  if (!accumulate) c.fill(0.0);
  for (int i = 0; i < m; ++i) {
    const double* arow = a.row_ptr(i);
    double* crow = c.row_ptr(i);
    for (int p = 0; p < k; ++p) {
      const double av = arow[p];
      if (av == 0.0) continue;
      const double* brow = b.row_ptr(p);
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void gemm_nt(const TensorF& a, const TensorF& b, TensorF& c, bool accumulate) {
  check_2d(a, "gemm_nt");
  check_2d(b, "gemm_nt");
  const int m = a.rows(), k = a.cols(), n = b.rows();
  if (b.cols() != k) throw std::invalid_argument("gemm_nt: inner dims disagree " + a.shape_str() + " vs " + b.shape_str());
  if (c.shape != std::vector<int>{m, n}) c = TensorF::zeros({m, n});
  if (!accumulate) c.fill(0.0);
  for (int i = 0; i < m; ++i) {
    const double* arow = a.row_ptr(i);
    double* crow = c.row_ptr(i);
    for (int j = 0; j < n; ++j) {
      const double* brow = b.row_ptr(j);
      double s = 0.0;
      for (int p = 0; p < k; ++p) s += arow[p] * brow[p];
      crow[j] += s;
    }
  }
}

void gemm_tn(const TensorF& a, const TensorF& b, TensorF& c, bool accumulate) {
  check_2d(a, "gemm_tn");
  check_2d(b, "gemm_tn");
  const int k = a.rows(), m = a.cols(), n = b.cols();
  if (b.rows() != k) throw std::invalid_argument("gemm_tn: inner dims disagree " + a.shape_str() + " vs " + b.shape_str());
  if (c.shape != std::vector<int>{m, n}) c = TensorF::zeros({m, n});
  if (!accumulate) c.fill(0.0);
  for (int p = 0; p < k; ++p) {
    const double* arow = a.row_ptr(p);
    const double* brow = b.row_ptr(p);
    for (int i = 0; i < m; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* crow = c.row_ptr(i);
      for (int j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

TensorF matmul(const TensorF& a, const TensorF& b) {
  TensorF c;
  gemm_nn(a, b, c);
  return c;
}

void axpy(double alpha, const TensorF& x, TensorF& y) {
  if (!x.same_shape(y)) throw std::invalid_argument("axpy: shape mismatch " + x.shape_str() + " vs " + y.shape_str());
  for (size_t i = 0; i < x.data.size(); ++i) y.data[i] += alpha * x.data[i];
}

}  // namespace radlab
