// SPDX-License-Identifier: Apache-2.0
#include "radlab/kernels.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace radlab::kern {

void add_row_bias_inplace(TensorF& m, const TensorF& bias) {
  const int r = m.rows(), c = m.cols();
  if (bias.ndim() != 1 || bias.dim(0) != c) {
    throw std::invalid_argument("add_row_bias: bias " + bias.shape_str() + " vs mat " + m.shape_str());
  }
  for (int i = 0; i < r; ++i) {
    double* row = m.row_ptr(i);
    for (int j = 0; j < c; ++j) row[j] += bias.data[static_cast<size_t>(j)];
  }
}

void sigmoid_inplace(TensorF& x) {
  for (double& v : x.data) v = 1.0 / (1.0 + std::exp(-v));
}

TensorF gelu_forward(const TensorF& x) {
  TensorF y = x;
  for (double& v : y.data) v = 0.5 * v * (1.0 + std::erf(v * M_SQRT1_2));
  return y;
}

TensorF softmax_rows_forward(const TensorF& x, const std::vector<uint8_t>* mask) {
  if (x.ndim() != 2) throw std::invalid_argument("softmax_rows: expected 2-D input, got " + x.shape_str());
  if (mask && mask->size() != x.size()) throw std::invalid_argument("softmax_rows: mask size mismatch");
  const int r = x.rows(), c = x.cols();
  TensorF y = TensorF::zeros({r, c});
  for (int i = 0; i < r; ++i) {
    const double* in = x.row_ptr(i);
    const uint8_t* mrow = mask ? mask->data() + static_cast<size_t>(i) * static_cast<size_t>(c) : nullptr;
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < c; ++j) {
      if (mrow && !mrow[j]) continue;
      if (in[j] > mx) mx = in[j];
    }
    if (mx == -std::numeric_limits<double>::infinity()) {
      throw std::invalid_argument("softmax_rows: fully masked row " + std::to_string(i));
    }
    double* out = y.row_ptr(i);
    double sum = 0.0;
    for (int j = 0; j < c; ++j) {
      if (mrow && !mrow[j]) continue;
      out[j] = std::exp(in[j] - mx);
      sum += out[j];
    }
    const double inv = 1.0 / sum;
    for (int j = 0; j < c; ++j) out[j] *= inv;
  }
  return y;
}

std::pair<TensorF, TensorF> layernorm_stats(const TensorF& x) {
  if (x.ndim() < 1) throw std::invalid_argument("layernorm_stats: empty tensor");
  const int d = x.shape.back();
  if (d < 2) throw std::invalid_argument("layernorm_stats: last dim must be >= 2 for ddof=1 std");
  const int rows = static_cast<int>(x.size()) / d;
  TensorF mean = TensorF::zeros({rows});
  TensorF std_out = TensorF::zeros({rows});
  for (int i = 0; i < rows; ++i) {
    const double* row = x.data.data() + static_cast<size_t>(i) * static_cast<size_t>(d);
    double mu = 0.0;
    for (int j = 0; j < d; ++j) mu += row[j];
    mu /= d;
    double ss = 0.0;
    for (int j = 0; j < d; ++j) {
      const double u = row[j] - mu;
      ss += u * u;
    }
    mean.data[static_cast<size_t>(i)] = mu;
    std_out.data[static_cast<size_t>(i)] = std::sqrt(ss / (d - 1));
  }
  return {mean, std_out};
}

TensorF layernorm_forward(const TensorF& x, const TensorF& gain, const TensorF& bias, double eps,
                          TensorF* save_xhat, TensorF* save_rstd) {
  const int r = x.rows(), d = x.cols();
  if (gain.dim(0) != d || bias.dim(0) != d) throw std::invalid_argument("layernorm: gain/bias dim mismatch");
  TensorF y = TensorF::zeros({r, d});
  if (save_xhat) *save_xhat = TensorF::zeros({r, d});
  if (save_rstd) *save_rstd = TensorF::zeros({r});
  for (int i = 0; i < r; ++i) {
    const double* in = x.row_ptr(i);
    double mu = 0.0;
    for (int j = 0; j < d; ++j) mu += in[j];
    mu /= d;
    double var = 0.0;
    for (int j = 0; j < d; ++j) {
      const double u = in[j] - mu;
      var += u * u;
    }
    var /= d;
    const double rstd = 1.0 / std::sqrt(var + eps);
    double* out = y.row_ptr(i);
    for (int j = 0; j < d; ++j) {
      const double xh = (in[j] - mu) * rstd;
      if (save_xhat) save_xhat->at(i, j) = xh;
      out[j] = gain.data[static_cast<size_t>(j)] * xh + bias.data[static_cast<size_t>(j)];
    }
    if (save_rstd) save_rstd->data[static_cast<size_t>(i)] = rstd;
  }
  return y;
}

TensorF attn_mix_forward(const TensorF& q, const TensorF& k, const TensorF& v, int b, int t,
                         double scale, TensorF* save_probs) {
  const int d = q.cols();
  if (q.rows() != b * t || !q.same_shape(k) || !q.same_shape(v)) {
    throw std::invalid_argument("attn_mix: q/k/v must be [b*t x d_head]");
  }
  TensorF y = TensorF::zeros({b * t, d});
  if (save_probs) *save_probs = TensorF::zeros({b * t, t});
  std::vector<double> prow(static_cast<size_t>(t));
  for (int s = 0; s < b; ++s) {
    const int base = s * t;
    for (int i = 0; i < t; ++i) {
      const double* qi = q.row_ptr(base + i);
      double mx = -std::numeric_limits<double>::infinity();
      for (int u = 0; u <= i; ++u) {
        const double* ku = k.row_ptr(base + u);
        double dot = 0.0;
        for (int j = 0; j < d; ++j) dot += qi[j] * ku[j];
        prow[static_cast<size_t>(u)] = dot * scale;
        if (prow[static_cast<size_t>(u)] > mx) mx = prow[static_cast<size_t>(u)];
      }
      double sum = 0.0;
      for (int u = 0; u <= i; ++u) {
        prow[static_cast<size_t>(u)] = std::exp(prow[static_cast<size_t>(u)] - mx);
        sum += prow[static_cast<size_t>(u)];
      }
      const double inv = 1.0 / sum;
      double* yi = y.row_ptr(base + i);
      for (int u = 0; u <= i; ++u) {
        const double p = prow[static_cast<size_t>(u)] * inv;
        if (save_probs) save_probs->at(base + i, u) = p;
        const double* vu = v.row_ptr(base + u);
        for (int j = 0; j < d; ++j) yi[j] += p * vu[j];
      }
    }
  }
  return y;
}

TensorF ssm_apply_forward(const TensorF& a, const TensorF& bm, const TensorF& cm, const TensorF& xc,
                          const TensorF& d, int b, int t, TensorF* save_h) {
  const int s_dim = a.cols(), dh = xc.cols();
  if (a.rows() != b * t || !a.same_shape(bm) || !a.same_shape(cm) || xc.rows() != b * t || d.dim(0) != dh) {
    throw std::invalid_argument("ssm_apply: coefficient shape mismatch");
  }
  TensorF y = TensorF::zeros({b * t, dh});
  if (save_h) *save_h = TensorF::zeros({b * t, s_dim * dh});
  std::vector<double> h(static_cast<size_t>(s_dim) * static_cast<size_t>(dh));
  for (int seq = 0; seq < b; ++seq) {
    const int base = seq * t;
    std::fill(h.begin(), h.end(), 0.0);
    for (int i = 0; i < t; ++i) {
      const double* at = a.row_ptr(base + i);
      const double* bt = bm.row_ptr(base + i);
      const double* ct = cm.row_ptr(base + i);
      const double* xt = xc.row_ptr(base + i);
      double* yt = y.row_ptr(base + i);
      for (int si = 0; si < s_dim; ++si) {
        double* hrow = h.data() + static_cast<size_t>(si) * static_cast<size_t>(dh);
        const double ai = at[si], bi = bt[si], ci = ct[si];
        for (int j = 0; j < dh; ++j) {
          hrow[j] = ai * hrow[j] + bi * xt[j];
          yt[j] += ci * hrow[j];
        }
      }
      for (int j = 0; j < dh; ++j) yt[j] += d.data[static_cast<size_t>(j)] * xt[j];
      if (save_h) {
        double* dst = save_h->row_ptr(base + i);
        for (size_t p = 0; p < h.size(); ++p) dst[p] = h[p];
      }
      bool finite = true;
      for (int j = 0; j < dh; ++j) {
        if (!std::isfinite(yt[j])) finite = false;
      }
      if (!finite) throw std::runtime_error("ssm_apply: non-finite state");
    }
  }
  return y;
}

TensorF adapter_forward(const TensorF& att, const TensorF& ssm, double eps, AdapterStats* save) {
  const int rows = att.rows(), m = att.cols(), r = ssm.cols();
  if (ssm.rows() != rows) throw std::invalid_argument("adapter: row count mismatch");
  if (m < 2 || r < 2) throw std::invalid_argument("adapter: feature dim must be >= 2");
  TensorF y = TensorF::zeros({rows, m});
  if (save) {
    save->att_mean = TensorF::zeros({rows});
    save->att_std = TensorF::zeros({rows});
    save->ssm_mean = TensorF::zeros({rows});
    save->ssm_std = TensorF::zeros({rows});
  }
  for (int i = 0; i < rows; ++i) {
    const double* xa = att.row_ptr(i);
    const double* xs = ssm.row_ptr(i);
    double mu_x = 0.0, mu_y = 0.0;
    for (int j = 0; j < m; ++j) mu_x += xa[j];
    mu_x /= m;
    for (int j = 0; j < r; ++j) mu_y += xs[j];
    mu_y /= r;
    double ssx = 0.0, ssy = 0.0;
    for (int j = 0; j < m; ++j) {
      const double u = xa[j] - mu_x;
      ssx += u * u;
    }
    for (int j = 0; j < r; ++j) {
      const double u = xs[j] - mu_y;
      ssy += u * u;
    }
    const double sx = std::sqrt(ssx / (m - 1));
    const double sy = std::sqrt(ssy / (r - 1));
    const double alpha = (sy + eps) / (sx + eps);
    double* out = y.row_ptr(i);
    for (int j = 0; j < m; ++j) out[j] = (xa[j] - mu_x) * alpha + mu_y;
    if (save) {
      save->att_mean.data[static_cast<size_t>(i)] = mu_x;
      save->att_std.data[static_cast<size_t>(i)] = sx;
      save->ssm_mean.data[static_cast<size_t>(i)] = mu_y;
      save->ssm_std.data[static_cast<size_t>(i)] = sy;
    }
  }
  return y;
}

TensorF embedding_forward(const TensorF& table, const std::vector<int>& ids) {
  const int d = table.cols();
  TensorF y = TensorF::zeros({static_cast<int>(ids.size()), d});
  for (size_t i = 0; i < ids.size(); ++i) {
    const int id = ids[i];
    if (id < 0 || id >= table.rows()) throw std::invalid_argument("embedding: id out of range");
    const double* src = table.row_ptr(id);
    double* dst = y.row_ptr(static_cast<int>(i));
    for (int j = 0; j < d; ++j) dst[j] = src[j];
  }
  return y;
}

double logsumexp_row(const double* row, int n) {
  double mx = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    if (row[j] > mx) mx = row[j];
  }
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += std::exp(row[j] - mx);
  return mx + std::log(sum);
}

}  // namespace radlab::kern
