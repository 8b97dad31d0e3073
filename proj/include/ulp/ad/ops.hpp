// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>
#include <vector>

#include "ulp/ad/graph.hpp"

namespace ulp::ad {

enum class Activation { Sigmoid, Tanh, Relu, Gelu };

std::string_view to_string(Activation kind);

/// sqrt(2/pi), used by the tanh approximation of GELU.
inline constexpr double kGeluScale = 0.7978845608028654;
inline constexpr double kGeluCubic = 0.044715;

// Dense layers -------------------------------------------------------------

/// x[B,I] . w[I,O]
Var matmul(Var x, Var w);
/// x[B,I] . w[I,O] + b[O]
Var matmul_bias(Var x, Var w, Var b);

/// Cross-correlation of x[B,Cin,L] with k[Cout,Cin,K], zero padded on both
/// sides by `padding`. Output length is L + 2*padding - K + 1.
Var conv1d(Var x, Var k, std::size_t padding);
/// x[B,C,L] + b[C] broadcast along B and L.
Var add_channel_bias(Var x, Var b);

// Elementwise ----------------------------------------------------------------

/// a + b where b has a's shape or a trailing suffix of it (broadcast over the
/// leading axes).
Var add(Var a, Var b);
/// Hadamard product with the same broadcasting rule as add().
Var mul(Var a, Var b);
Var scale(Var x, double factor);

Var sigmoid(Var x);
Var tanh(Var x);
Var relu(Var x);
/// Tanh approximation: 0.5 x (1 + tanh(sqrt(2/pi) (x + 0.044715 x^3))).
Var gelu(Var x);
Var activate(Var x, Activation kind);

// Attention / normalization ---------------------------------------------------

/// softmax(q k^T / sqrt(D)) v for every (batch, head); inputs are [B,H,T,D].
Var softmax_attention(Var q, Var k, Var v);
/// The row-stochastic weights softmax(q k^T / sqrt(D)) as [B,H,T,T], outside any graph.
Tensor attention_weights(const Tensor& q, const Tensor& k);
/// Normalizes over the last axis, then applies gamma[D] and beta[D].
Var layer_norm(Var x, Var gamma, Var beta, double eps = 1e-5);

// Shape ------------------------------------------------------------------------

Var reshape(Var x, Shape shape);
/// Output axis i is input axis perm[i].
Var permute(Var x, const std::vector<std::size_t>& perm);
/// Selects `index` along `axis`, dropping that axis.
Var take(Var x, std::size_t axis, std::size_t index);
/// Mean along `axis`, dropping that axis.
Var mean(Var x, std::size_t axis);
/// Sum of all elements as a one-element tensor.
Var sum(Var x);

// Losses -------------------------------------------------------------------------

/// mean((pred - target)^2) over equal-length vectors.
Var mse_loss(Var pred, Var target);

}  // namespace ulp::ad
