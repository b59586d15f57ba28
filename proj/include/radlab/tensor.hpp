// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "radlab/rng.hpp"

namespace radlab {

// Dense row-major f64 tensor. The universal value carrier for activations,
// weights and gradients. Most tensors in the project are 1-D or 2-D.
struct TensorF {
  std::vector<int> shape;
  std::vector<double> data;

  TensorF() = default;
  TensorF(std::vector<int> s, std::vector<double> d);

  static TensorF zeros(std::vector<int> shape);
  static TensorF full(std::vector<int> shape, double value);
  static TensorF scalar(double value) { return TensorF({1}, {value}); }
  static TensorF gaussian(std::vector<int> shape, Rng& rng, double std, double mean = 0.0);

  size_t size() const { return data.size(); }
  int ndim() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }

  // 2-D accessors.
  int rows() const { return shape[0]; }
  int cols() const { return ndim() == 1 ? shape[0] : shape[1]; }
  double& at(int r, int c) { return data[static_cast<size_t>(r) * static_cast<size_t>(cols()) + static_cast<size_t>(c)]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * static_cast<size_t>(cols()) + static_cast<size_t>(c)]; }
  double* row_ptr(int r) { return data.data() + static_cast<size_t>(r) * static_cast<size_t>(cols()); }
  const double* row_ptr(int r) const { return data.data() + static_cast<size_t>(r) * static_cast<size_t>(cols()); }

  bool same_shape(const TensorF& o) const { return shape == o.shape; }
  bool all_finite() const;
  void fill(double v);
  double item() const;  // 1-element tensors only

  std::string shape_str() const;
};

size_t shape_numel(const std::vector<int>& shape);

// Throws std::invalid_argument on NaN/Inf entries; contract for all kernels.
void require_finite(const TensorF& t, const char* what);

// ---- raw GEMM kernels (no broadcasting, plain f64, deterministic) ----
// c = a·b, a: m×k, b: k×n. accumulate=true adds into c instead of overwriting.
void gemm_nn(const TensorF& a, const TensorF& b, TensorF& c, bool accumulate = false);
// c = a·bᵀ, a: m×k, b: n×k.
void gemm_nt(const TensorF& a, const TensorF& b, TensorF& c, bool accumulate = false);
// c = aᵀ·b, a: k×m, b: k×n.
void gemm_tn(const TensorF& a, const TensorF& b, TensorF& c, bool accumulate = false);

// Convenience wrapper with shape checks, used by the public matmul op.
TensorF matmul(const TensorF& a, const TensorF& b);

// ---- elementwise helpers on raw tensors ----
void axpy(double alpha, const TensorF& x, TensorF& y);  // y += alpha·x

}  // namespace radlab
