// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "radlab/tensor.hpp"

// Forward kernels shared by the training tape and the no-grad evaluation
// path. Both paths must produce bit-identical values, so every model op has
// exactly one forward implementation, here.
namespace radlab::kern {

void add_row_bias_inplace(TensorF& m, const TensorF& bias);
void sigmoid_inplace(TensorF& x);
TensorF gelu_forward(const TensorF& x);

// Row-wise softmax with optional keep-mask (1 = participate). Masked entries
// are exactly zero in the output. Throws on fully masked rows.
TensorF softmax_rows_forward(const TensorF& x, const std::vector<uint8_t>* mask);

// Per-position mean and sample std (divisor d-1) over the last dim.
// Requires d >= 2.
std::pair<TensorF, TensorF> layernorm_stats(const TensorF& x);

// Standard layernorm over rows (population variance, eps inside the sqrt).
// Optionally saves xhat and 1/std for the backward pass.
TensorF layernorm_forward(const TensorF& x, const TensorF& gain, const TensorF& bias, double eps,
                          TensorF* save_xhat, TensorF* save_rstd);

// Causal softmax attention mix for a batch of b sequences of length t packed
// row-wise: q,k,v are [b*t x d_head]. Optionally saves the attention
// probabilities ([b*t x t], one t-wide row block per sequence).
TensorF attn_mix_forward(const TensorF& q, const TensorF& k, const TensorF& v, int b, int t,
                         double scale, TensorF* save_probs);

// Selective-scan application given precomputed per-step coefficients.
// a, bm, cm: [b*t x d_state]; xc: [b*t x d_head]; d: [d_head].
//   h_t = diag(a_t) h_{t-1} + b_t x_t^T,  y_t = h_t^T c_t + d (.) x_t
// Optionally saves all hidden states ([b*t x d_state*d_head]).
TensorF ssm_apply_forward(const TensorF& a, const TensorF& bm, const TensorF& cm, const TensorF& xc,
                          const TensorF& d, int b, int t, TensorF* save_h);

// Parameter-free adapter: whiten att per position (divisor n-1 stats, eps
// added to both stds), then rescale/shift to the ssm branch's stats.
struct AdapterStats {
  TensorF att_mean, att_std, ssm_mean, ssm_std;  // one row each, [rows]
};
TensorF adapter_forward(const TensorF& att, const TensorF& ssm, double eps, AdapterStats* save);

TensorF embedding_forward(const TensorF& table, const std::vector<int>& ids);

// Row-wise log-sum-exp, numerically stabilized.
double logsumexp_row(const double* row, int n);

}  // namespace radlab::kern
