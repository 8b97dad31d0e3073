// SPDX-License-Identifier: Apache-2.0
#include "ulp/ad/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ulp/common/error.hpp"

namespace ulp::ad {

namespace {

constexpr const char* kModule = "tensor-autodiff";

[[noreturn]] void dimension_error(const std::string& op, const std::string& detail) {
    throw Error(ErrorKind::Dimension, kModule, op + ": " + detail);
}

Graph& graph_of(std::initializer_list<Var> vars) {
    Graph* g = nullptr;
    for (const Var& v : vars) {
        if (!v.graph) throw Error(ErrorKind::Contract, kModule, "unbound variable");
        if (g && g != v.graph) throw Error(ErrorKind::Contract, kModule, "variables from different graphs");
        g = v.graph;
    }
    return *g;
}

// Accumulation target for input `which` of node `self`, or nullptr when that
// input does not take part in differentiation.
Tensor* grad_target(Graph& g, std::uint32_t self, std::size_t which) {
    const auto id = g.inputs(self)[which];
    return g.requires_grad(id) ? &g.grad_buffer(id) : nullptr;
}

bool is_suffix(const Shape& small, const Shape& big) {
    if (small.size() > big.size()) return false;
    return std::equal(small.rbegin(), small.rend(), big.rbegin());
}

std::vector<std::size_t> strides_of(const Shape& s) {
    std::vector<std::size_t> st(s.size(), 1);
    for (std::size_t i = s.size(); i-- > 1;) st[i - 1] = st[i] * s[i];
    return st;
}

template <class F, class D>
Var unary(Var x, std::string_view name, F f, D dfdx_from_xy) {
    Graph& g = graph_of({x});
    const Tensor& xv = x.value();
    Tensor y(xv.shape());
    for (std::size_t i = 0; i < xv.size(); ++i) y[i] = f(xv[i]);
    return g.push(name, {x.id}, std::move(y), [dfdx_from_xy](Graph& gr, std::uint32_t self) {
        Tensor* dx = grad_target(gr, self, 0);
        if (!dx) return;
        const Tensor& xv = gr.value(gr.inputs(self)[0]);
        const Tensor& yv = gr.value(self);
        const Tensor& dy = gr.grad_buffer(self);
        for (std::size_t i = 0; i < dy.size(); ++i) (*dx)[i] += dy[i] * dfdx_from_xy(xv[i], yv[i]);
    });
}

}  // namespace

std::string_view to_string(Activation kind) {
    switch (kind) {
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::Gelu: return "gelu";
    }
    return "?";
}

// ---------------------------------------------------------------------------

Var matmul(Var x, Var w) {
    Graph& g = graph_of({x, w});
    const Tensor& xv = x.value();
    const Tensor& wv = w.value();
    if (xv.rank() != 2 || wv.rank() != 2 || xv.dim(1) != wv.dim(0))
        dimension_error("matmul", "cannot multiply " + to_string(xv.shape()) + " by " + to_string(wv.shape()));
    const std::size_t rows = xv.dim(0), inner = xv.dim(1), cols = wv.dim(1);
    Tensor out({rows, cols});
    for (std::size_t r = 0; r < rows; ++r) {
        double* o = &out[r * cols];
        for (std::size_t k = 0; k < inner; ++k) {
            const double a = xv[r * inner + k];
            const double* wr = &wv.data()[k * cols];
            for (std::size_t c = 0; c < cols; ++c) o[c] += a * wr[c];
        }
    }
    return g.push("matmul", {x.id, w.id}, std::move(out), [rows, inner, cols](Graph& gr, std::uint32_t self) {
        const Tensor& dy = gr.grad_buffer(self);
        const auto& in = gr.inputs(self);
        const Tensor& xv = gr.value(in[0]);
        const Tensor& wv = gr.value(in[1]);
        if (Tensor* dx = grad_target(gr, self, 0)) {
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t k = 0; k < inner; ++k) {
                    const double* wr = &wv.data()[k * cols];
                    const double* d = &dy.data()[r * cols];
                    double acc = 0.0;
                    for (std::size_t c = 0; c < cols; ++c) acc += d[c] * wr[c];
                    (*dx)[r * inner + k] += acc;
                }
        }
        if (Tensor* dw = grad_target(gr, self, 1)) {
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t k = 0; k < inner; ++k) {
                    const double a = xv[r * inner + k];
                    double* dwr = &dw->data()[k * cols];
                    const double* d = &dy.data()[r * cols];
                    for (std::size_t c = 0; c < cols; ++c) dwr[c] += a * d[c];
                }
        }
    });
}

Var matmul_bias(Var x, Var w, Var b) {
    const Tensor& bv = b.value();
    if (x.value().rank() == 2 && w.value().rank() == 2 &&
        (bv.rank() != 1 || bv.dim(0) != w.value().dim(1)))
        dimension_error("matmul_bias", "bias " + to_string(bv.shape()) + " does not match weight " +
                                           to_string(w.value().shape()));
    return add(matmul(x, w), b);
}

Var conv1d(Var x, Var k, std::size_t padding) {
    Graph& g = graph_of({x, k});
    const Tensor& xv = x.value();
    const Tensor& kv = k.value();
    if (xv.rank() != 3 || kv.rank() != 3 || xv.dim(1) != kv.dim(1))
        dimension_error("conv1d", "input " + to_string(xv.shape()) + " incompatible with kernel " +
                                      to_string(kv.shape()));
    const std::size_t batch = xv.dim(0), cin = xv.dim(1), len = xv.dim(2);
    const std::size_t cout = kv.dim(0), width = kv.dim(2);
    if (width % 2 == 0) dimension_error("conv1d", "kernel width must be odd, got " + std::to_string(width));
    if (len + 2 * padding < width)
        dimension_error("conv1d", "output length < 1 for input " + to_string(xv.shape()) + ", kernel " +
                                      to_string(kv.shape()) + ", padding " + std::to_string(padding));
    const std::size_t lout = len + 2 * padding - width + 1;

    // out[b,o,j] = sum_c sum_t k[o,c,t] * x[b,c,j+t-padding]
    Tensor out({batch, cout, lout});
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t o = 0; o < cout; ++o) {
            double* orow = &out[(b * cout + o) * lout];
            for (std::size_t c = 0; c < cin; ++c) {
                const double* xrow = &xv.data()[(b * cin + c) * len];
                const double* krow = &kv.data()[(o * cin + c) * width];
                for (std::size_t t = 0; t < width; ++t) {
                    const double kw = krow[t];
                    // j + t - padding in [0, len)
                    const std::size_t jlo = padding > t ? padding - t : 0;
                    const std::size_t jhi = len + padding > t ? std::min(lout, len + padding - t) : 0;
                    for (std::size_t j = jlo; j < jhi; ++j) orow[j] += kw * xrow[j + t - padding];
                }
            }
        }

    return g.push("conv1d", {x.id, k.id}, std::move(out),
                  [=](Graph& gr, std::uint32_t self) {
                      const Tensor& dy = gr.grad_buffer(self);
                      const auto& in = gr.inputs(self);
                      const Tensor& xv = gr.value(in[0]);
                      const Tensor& kv = gr.value(in[1]);
                      Tensor* dx = grad_target(gr, self, 0);
                      Tensor* dk = grad_target(gr, self, 1);
                      for (std::size_t b = 0; b < batch; ++b)
                          for (std::size_t o = 0; o < cout; ++o) {
                              const double* drow = &dy.data()[(b * cout + o) * lout];
                              for (std::size_t c = 0; c < cin; ++c) {
                                  const std::size_t xoff = (b * cin + c) * len;
                                  const std::size_t koff = (o * cin + c) * width;
                                  for (std::size_t t = 0; t < width; ++t) {
                                      const std::size_t jlo = padding > t ? padding - t : 0;
                                      const std::size_t jhi = len + padding > t ? std::min(lout, len + padding - t) : 0;
                                      if (dx) {
                                          const double kw = kv[koff + t];
                                          for (std::size_t j = jlo; j < jhi; ++j)
                                              (*dx)[xoff + j + t - padding] += kw * drow[j];
                                      }
                                      if (dk) {
                                          double acc = 0.0;
                                          for (std::size_t j = jlo; j < jhi; ++j)
                                              acc += xv[xoff + j + t - padding] * drow[j];
                                          (*dk)[koff + t] += acc;
                                      }
                                  }
                              }
                          }
                  });
}

Var add_channel_bias(Var x, Var b) {
    Graph& g = graph_of({x, b});
    const Tensor& xv = x.value();
    const Tensor& bv = b.value();
    if (xv.rank() != 3 || bv.rank() != 1 || bv.dim(0) != xv.dim(1))
        dimension_error("add_channel_bias", "bias " + to_string(bv.shape()) + " does not match " +
                                                to_string(xv.shape()));
    const std::size_t batch = xv.dim(0), ch = xv.dim(1), len = xv.dim(2);
    Tensor out = xv;
    for (std::size_t n = 0; n < batch; ++n)
        for (std::size_t c = 0; c < ch; ++c)
            for (std::size_t j = 0; j < len; ++j) out[(n * ch + c) * len + j] += bv[c];
    return g.push("add_channel_bias", {x.id, b.id}, std::move(out), [=](Graph& gr, std::uint32_t self) {
        const Tensor& dy = gr.grad_buffer(self);
        if (Tensor* dx = grad_target(gr, self, 0))
            for (std::size_t i = 0; i < dy.size(); ++i) (*dx)[i] += dy[i];
        if (Tensor* db = grad_target(gr, self, 1))
            for (std::size_t n = 0; n < batch; ++n)
                for (std::size_t c = 0; c < ch; ++c)
                    for (std::size_t j = 0; j < len; ++j) (*db)[c] += dy[(n * ch + c) * len + j];
    });
}

// ---------------------------------------------------------------------------

Var add(Var a, Var b) {
    Graph& g = graph_of({a, b});
    const Tensor& av = a.value();
    const Tensor& bv = b.value();
    if (!is_suffix(bv.shape(), av.shape()))
        dimension_error("add", "cannot broadcast " + to_string(bv.shape()) + " onto " + to_string(av.shape()));
    const std::size_t inner = bv.size();
    Tensor out = av;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i % inner];
    return g.push("add", {a.id, b.id}, std::move(out), [inner](Graph& gr, std::uint32_t self) {
        const Tensor& dy = gr.grad_buffer(self);
        if (Tensor* da = grad_target(gr, self, 0))
            for (std::size_t i = 0; i < dy.size(); ++i) (*da)[i] += dy[i];
        if (Tensor* db = grad_target(gr, self, 1))
            for (std::size_t i = 0; i < dy.size(); ++i) (*db)[i % inner] += dy[i];
    });
}

Var mul(Var a, Var b) {
    Graph& g = graph_of({a, b});
    const Tensor& av = a.value();
    const Tensor& bv = b.value();
    if (!is_suffix(bv.shape(), av.shape()))
        dimension_error("mul", "cannot broadcast " + to_string(bv.shape()) + " onto " + to_string(av.shape()));
    const std::size_t inner = bv.size();
    Tensor out = av;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= bv[i % inner];
    return g.push("mul", {a.id, b.id}, std::move(out), [inner](Graph& gr, std::uint32_t self) {
        const Tensor& dy = gr.grad_buffer(self);
        const auto& in = gr.inputs(self);
        const Tensor& av = gr.value(in[0]);
        const Tensor& bv = gr.value(in[1]);
        if (Tensor* da = grad_target(gr, self, 0))
            for (std::size_t i = 0; i < dy.size(); ++i) (*da)[i] += dy[i] * bv[i % inner];
        if (Tensor* db = grad_target(gr, self, 1))
            for (std::size_t i = 0; i < dy.size(); ++i) (*db)[i % inner] += dy[i] * av[i];
    });
}

Var scale(Var x, double factor) {
    return unary(
        x, "scale", [factor](double v) { return factor * v; }, [factor](double, double) { return factor; });
}

Var sigmoid(Var x) {
    return unary(
        x, "sigmoid",
        [](double v) {
            // split by sign so exp() never overflows
            if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
            const double e = std::exp(v);
            return e / (1.0 + e);
        },
        [](double, double y) { return y * (1.0 - y); });
}

Var tanh(Var x) {
    return unary(
        x, "tanh", [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Var relu(Var x) {
    return unary(
        x, "relu", [](double v) { return v > 0.0 ? v : 0.0; },
        [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var gelu(Var x) {
    return unary(
        x, "gelu",
        [](double v) { return 0.5 * v * (1.0 + std::tanh(kGeluScale * (v + kGeluCubic * v * v * v))); },
        [](double v, double) {
            const double t = std::tanh(kGeluScale * (v + kGeluCubic * v * v * v));
            return 0.5 * (1.0 + t) + 0.5 * v * (1.0 - t * t) * kGeluScale * (1.0 + 3.0 * kGeluCubic * v * v);
        });
}

Var activate(Var x, Activation kind) {
    switch (kind) {
        case Activation::Sigmoid: return sigmoid(x);
        case Activation::Tanh: return tanh(x);
        case Activation::Relu: return relu(x);
        case Activation::Gelu: return gelu(x);
    }
    return x;
}

// ---------------------------------------------------------------------------

Var softmax_attention(Var q, Var k, Var v) {
    Graph& g = graph_of({q, k, v});
    const Tensor& qv = q.value();
    const Tensor& kv = k.value();
    const Tensor& vv = v.value();
    if (qv.rank() != 4 || kv.shape() != qv.shape() || vv.shape() != qv.shape())
        dimension_error("softmax_attention", "q " + to_string(qv.shape()) + ", k " + to_string(kv.shape()) +
                                                 ", v " + to_string(vv.shape()) + " must share a [B,H,T,D] shape");
    const std::size_t heads = qv.dim(0) * qv.dim(1), steps = qv.dim(2), depth = qv.dim(3);
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(depth));

    Tensor probs = attention_weights(qv, kv);
    Tensor out(qv.shape());
    for (std::size_t h = 0; h < heads; ++h) {
        const double* p = &probs[h * steps * steps];
        const double* vh = &vv.data()[h * steps * depth];
        double* oh = &out[h * steps * depth];
        for (std::size_t i = 0; i < steps; ++i)
            for (std::size_t j = 0; j < steps; ++j) {
                const double w = p[i * steps + j];
                for (std::size_t d = 0; d < depth; ++d) oh[i * depth + d] += w * vh[j * depth + d];
            }
    }

    return g.push("softmax_attention", {q.id, k.id, v.id}, std::move(out),
                  [=, probs = std::move(probs)](Graph& gr, std::uint32_t self) {
                      const Tensor& dy = gr.grad_buffer(self);
                      const auto& in = gr.inputs(self);
                      const Tensor& qv = gr.value(in[0]);
                      const Tensor& kv = gr.value(in[1]);
                      const Tensor& vv = gr.value(in[2]);
                      Tensor* dq = grad_target(gr, self, 0);
                      Tensor* dk = grad_target(gr, self, 1);
                      Tensor* dv = grad_target(gr, self, 2);
                      std::vector<double> dp(steps * steps), ds(steps * steps);
                      for (std::size_t h = 0; h < heads; ++h) {
                          const std::size_t off = h * steps * depth;
                          const double* p = probs.data().data() + h * steps * steps;
                          const double* dyh = &dy.data()[off];
                          for (std::size_t i = 0; i < steps; ++i)
                              for (std::size_t j = 0; j < steps; ++j) {
                                  double acc = 0.0;
                                  for (std::size_t d = 0; d < depth; ++d)
                                      acc += dyh[i * depth + d] * vv[off + j * depth + d];
                                  dp[i * steps + j] = acc;
                                  if (dv)
                                      for (std::size_t d = 0; d < depth; ++d)
                                          (*dv)[off + j * depth + d] += p[i * steps + j] * dyh[i * depth + d];
                              }
                          for (std::size_t i = 0; i < steps; ++i) {
                              double dot = 0.0;
                              for (std::size_t j = 0; j < steps; ++j) dot += p[i * steps + j] * dp[i * steps + j];
                              for (std::size_t j = 0; j < steps; ++j)
                                  ds[i * steps + j] = p[i * steps + j] * (dp[i * steps + j] - dot) * inv_sqrt_d;
                          }
                          for (std::size_t i = 0; i < steps; ++i)
                              for (std::size_t j = 0; j < steps; ++j) {
                                  const double s = ds[i * steps + j];
                                  for (std::size_t d = 0; d < depth; ++d) {
                                      if (dq) (*dq)[off + i * depth + d] += s * kv[off + j * depth + d];
                                      if (dk) (*dk)[off + j * depth + d] += s * qv[off + i * depth + d];
                                  }
                              }
                      }
                  });
}

Tensor attention_weights(const Tensor& q, const Tensor& k) {
    if (q.rank() != 4 || k.shape() != q.shape())
        dimension_error("attention_weights", "q " + to_string(q.shape()) + " and k " + to_string(k.shape()) +
                                                 " must share a [B,H,T,D] shape");
    const std::size_t heads = q.dim(0) * q.dim(1), steps = q.dim(2), depth = q.dim(3);
    const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(depth));
    Tensor probs({q.dim(0), q.dim(1), steps, steps});
    for (std::size_t h = 0; h < heads; ++h) {
        const double* qh = &q.data()[h * steps * depth];
        const double* kh = &k.data()[h * steps * depth];
        double* p = &probs[h * steps * steps];
        for (std::size_t i = 0; i < steps; ++i) {
            double* row = p + i * steps;
            double top = -INFINITY;
            for (std::size_t j = 0; j < steps; ++j) {
                double s = 0.0;
                for (std::size_t d = 0; d < depth; ++d) s += qh[i * depth + d] * kh[j * depth + d];
                row[j] = s * inv_sqrt_d;
                top = std::max(top, row[j]);
            }
            double total = 0.0;
            for (std::size_t j = 0; j < steps; ++j) {
                row[j] = std::exp(row[j] - top);
                total += row[j];
            }
            for (std::size_t j = 0; j < steps; ++j) row[j] /= total;
        }
    }
    return probs;
}

Var layer_norm(Var x, Var gamma, Var beta, double eps) {
    Graph& g = graph_of({x, gamma, beta});
    const Tensor& xv = x.value();
    const std::size_t width = xv.shape().back();
    if (gamma.value().shape() != Shape{width} || beta.value().shape() != Shape{width})
        dimension_error("layer_norm", "gamma " + to_string(gamma.value().shape()) + " / beta " +
                                          to_string(beta.value().shape()) + " must be [" + std::to_string(width) +
                                          "]");
    const std::size_t rows = xv.size() / width;
    const Tensor& gv = gamma.value();
    const Tensor& bv = beta.value();
    Tensor xhat(xv.shape());
    std::vector<double> inv_std(rows);
    Tensor out(xv.shape());
    for (std::size_t r = 0; r < rows; ++r) {
        const double* xr = &xv.data()[r * width];
        double mu = 0.0;
        for (std::size_t i = 0; i < width; ++i) mu += xr[i];
        mu /= static_cast<double>(width);
        double var = 0.0;
        for (std::size_t i = 0; i < width; ++i) var += (xr[i] - mu) * (xr[i] - mu);
        var /= static_cast<double>(width);
        inv_std[r] = 1.0 / std::sqrt(var + eps);
        for (std::size_t i = 0; i < width; ++i) {
            const double h = (xr[i] - mu) * inv_std[r];
            xhat[r * width + i] = h;
            out[r * width + i] = gv[i] * h + bv[i];
        }
    }
    return g.push("layer_norm", {x.id, gamma.id, beta.id}, std::move(out),
                  [=, xhat = std::move(xhat), inv_std = std::move(inv_std)](Graph& gr, std::uint32_t self) {
                      const Tensor& dy = gr.grad_buffer(self);
                      const Tensor& gv = gr.value(gr.inputs(self)[1]);
                      Tensor* dx = grad_target(gr, self, 0);
                      Tensor* dg = grad_target(gr, self, 1);
                      Tensor* db = grad_target(gr, self, 2);
                      const double n = static_cast<double>(width);
                      for (std::size_t r = 0; r < rows; ++r) {
                          const std::size_t off = r * width;
                          double mean_d = 0.0, mean_dh = 0.0;
                          for (std::size_t i = 0; i < width; ++i) {
                              const double d = dy[off + i] * gv[i];
                              mean_d += d;
                              mean_dh += d * xhat[off + i];
                              if (dg) (*dg)[i] += dy[off + i] * xhat[off + i];
                              if (db) (*db)[i] += dy[off + i];
                          }
                          if (!dx) continue;
                          mean_d /= n;
                          mean_dh /= n;
                          for (std::size_t i = 0; i < width; ++i)
                              (*dx)[off + i] +=
                                  inv_std[r] * (dy[off + i] * gv[i] - mean_d - xhat[off + i] * mean_dh);
                      }
                  });
}

// ---------------------------------------------------------------------------

Var reshape(Var x, Shape shape) {
    Graph& g = graph_of({x});
    const Tensor& xv = x.value();
    if (numel(shape) != xv.size())
        dimension_error("reshape", "cannot reshape " + to_string(xv.shape()) + " to " + to_string(shape));
    return g.push("reshape", {x.id}, xv.reshaped(std::move(shape)), [](Graph& gr, std::uint32_t self) {
        Tensor* dx = grad_target(gr, self, 0);
        if (!dx) return;
        const Tensor& dy = gr.grad_buffer(self);
        for (std::size_t i = 0; i < dy.size(); ++i) (*dx)[i] += dy[i];
    });
}

Var permute(Var x, const std::vector<std::size_t>& perm) {
    Graph& g = graph_of({x});
    const Tensor& xv = x.value();
    const std::size_t rank = xv.rank();
    std::vector<std::size_t> seen(perm);
    std::sort(seen.begin(), seen.end());
    std::vector<std::size_t> identity(rank);
    std::iota(identity.begin(), identity.end(), 0);
    if (seen != identity) dimension_error("permute", "invalid permutation for shape " + to_string(xv.shape()));

    Shape out_shape(rank);
    for (std::size_t i = 0; i < rank; ++i) out_shape[i] = xv.dim(perm[i]);
    const auto in_strides = strides_of(xv.shape());
    // source offset for each output element, walked in output order
    std::vector<std::size_t> src(xv.size());
    std::vector<std::size_t> idx(rank, 0);
    for (std::size_t flat = 0; flat < src.size(); ++flat) {
        std::size_t off = 0;
        for (std::size_t i = 0; i < rank; ++i) off += idx[i] * in_strides[perm[i]];
        src[flat] = off;
        for (std::size_t i = rank; i-- > 0;) {
            if (++idx[i] < out_shape[i]) break;
            idx[i] = 0;
        }
    }
    Tensor out(out_shape);
    for (std::size_t i = 0; i < src.size(); ++i) out[i] = xv[src[i]];
    return g.push("permute", {x.id}, std::move(out), [src = std::move(src)](Graph& gr, std::uint32_t self) {
        Tensor* dx = grad_target(gr, self, 0);
        if (!dx) return;
        const Tensor& dy = gr.grad_buffer(self);
        for (std::size_t i = 0; i < src.size(); ++i) (*dx)[src[i]] += dy[i];
    });
}

Var take(Var x, std::size_t axis, std::size_t index) {
    Graph& g = graph_of({x});
    const Tensor& xv = x.value();
    if (axis >= xv.rank() || index >= xv.dim(axis) || xv.rank() < 2)
        dimension_error("take", "index " + std::to_string(index) + " on axis " + std::to_string(axis) +
                                    " out of range for " + to_string(xv.shape()));
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < axis; ++i) outer *= xv.dim(i);
    for (std::size_t i = axis + 1; i < xv.rank(); ++i) inner *= xv.dim(i);
    const std::size_t n = xv.dim(axis);
    Shape shape = xv.shape();
    shape.erase(shape.begin() + static_cast<std::ptrdiff_t>(axis));
    Tensor out(shape);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t i = 0; i < inner; ++i) out[o * inner + i] = xv[(o * n + index) * inner + i];
    return g.push("take", {x.id}, std::move(out), [=](Graph& gr, std::uint32_t self) {
        Tensor* dx = grad_target(gr, self, 0);
        if (!dx) return;
        const Tensor& dy = gr.grad_buffer(self);
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t i = 0; i < inner; ++i) (*dx)[(o * n + index) * inner + i] += dy[o * inner + i];
    });
}

Var mean(Var x, std::size_t axis) {
    Graph& g = graph_of({x});
    const Tensor& xv = x.value();
    if (axis >= xv.rank() || xv.rank() < 2)
        dimension_error("mean", "axis " + std::to_string(axis) + " invalid for " + to_string(xv.shape()));
    std::size_t outer = 1, inner = 1;
    for (std::size_t i = 0; i < axis; ++i) outer *= xv.dim(i);
    for (std::size_t i = axis + 1; i < xv.rank(); ++i) inner *= xv.dim(i);
    const std::size_t n = xv.dim(axis);
    Shape shape = xv.shape();
    shape.erase(shape.begin() + static_cast<std::ptrdiff_t>(axis));
    Tensor out(shape);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t o = 0; o < outer; ++o)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t i = 0; i < inner; ++i) out[o * inner + i] += xv[(o * n + a) * inner + i] * inv;
    return g.push("mean", {x.id}, std::move(out), [=](Graph& gr, std::uint32_t self) {
        Tensor* dx = grad_target(gr, self, 0);
        if (!dx) return;
        const Tensor& dy = gr.grad_buffer(self);
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t i = 0; i < inner; ++i) (*dx)[(o * n + a) * inner + i] += dy[o * inner + i] * inv;
    });
}

Var sum(Var x) {
    Graph& g = graph_of({x});
    const Tensor& xv = x.value();
    double total = 0.0;
    for (double v : xv.data()) total += v;
    return g.push("sum", {x.id}, Tensor::scalar(total), [](Graph& gr, std::uint32_t self) {
        Tensor* dx = grad_target(gr, self, 0);
        if (!dx) return;
        const double d = gr.grad_buffer(self)[0];
        for (double& v : dx->data()) v += d;
    });
}

Var mse_loss(Var pred, Var target) {
    Graph& g = graph_of({pred, target});
    const Tensor& pv = pred.value();
    const Tensor& tv = target.value();
    if (pv.size() != tv.size())
        dimension_error("mse_loss", "prediction " + to_string(pv.shape()) + " vs target " + to_string(tv.shape()));
    const std::size_t n = pv.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += (pv[i] - tv[i]) * (pv[i] - tv[i]);
    return g.push("mse_loss", {pred.id, target.id}, Tensor::scalar(acc / static_cast<double>(n)),
                  [n](Graph& gr, std::uint32_t self) {
                      const auto& in = gr.inputs(self);
                      const Tensor& pv = gr.value(in[0]);
                      const Tensor& tv = gr.value(in[1]);
                      const double d = gr.grad_buffer(self)[0] * 2.0 / static_cast<double>(n);
                      Tensor* dp = grad_target(gr, self, 0);
                      Tensor* dt = grad_target(gr, self, 1);
                      for (std::size_t i = 0; i < n; ++i) {
                          const double r = pv[i] - tv[i];
                          if (dp) (*dp)[i] += d * r;
                          if (dt) (*dt)[i] -= d * r;
                      }
                  });
}

}  // namespace ulp::ad
