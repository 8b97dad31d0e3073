// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "support/random.hpp"
#include "ulp/ad/tensor.hpp"
#include "ulp/model/predictor.hpp"

namespace ulp::test {

// Scalar-loop ConvLSTM step, written independently of the vectorized cell.
// Kernels: wx [4C,1,K], wh [4C,C,K]; bias [4C]; peepholes [C,F].
// Gate order i, f, candidate, o. Zero "same" padding along F.
struct ConvLstmOracle {
    std::size_t batch, channels, feats, width;
    std::vector<double> wx, wh, b, wci, wcf, wco;

    double conv_x(const std::vector<double>& x, std::size_t bi, std::size_t oc, std::size_t j) const {
        double acc = 0.0;
        for (std::size_t t = 0; t < width; ++t) {
            const long pos = static_cast<long>(j + t) - static_cast<long>(width / 2);
            if (pos < 0 || pos >= static_cast<long>(feats)) continue;
            acc += wx[oc * width + t] * x[bi * feats + static_cast<std::size_t>(pos)];
        }
        return acc;
    }

    double conv_h(const std::vector<double>& h, std::size_t bi, std::size_t oc, std::size_t j) const {
        double acc = 0.0;
        for (std::size_t ic = 0; ic < channels; ++ic)
            for (std::size_t t = 0; t < width; ++t) {
                const long pos = static_cast<long>(j + t) - static_cast<long>(width / 2);
                if (pos < 0 || pos >= static_cast<long>(feats)) continue;
                acc += wh[(oc * channels + ic) * width + t] *
                       h[(bi * channels + ic) * feats + static_cast<std::size_t>(pos)];
            }
        return acc;
    }

    static double sig(double v) { return 1.0 / (1.0 + std::exp(-v)); }

    // x [B*F], h/c [B*C*F]; writes h_out, c_out.
    void step(const std::vector<double>& x, const std::vector<double>& h, const std::vector<double>& c,
              std::vector<double>& h_out, std::vector<double>& c_out) const {
        h_out.assign(h.size(), 0.0);
        c_out.assign(c.size(), 0.0);
        for (std::size_t bi = 0; bi < batch; ++bi)
            for (std::size_t ch = 0; ch < channels; ++ch)
                for (std::size_t j = 0; j < feats; ++j) {
                    const std::size_t at = (bi * channels + ch) * feats + j;
                    const std::size_t pe = ch * feats + j;
                    double pre[4];
                    for (std::size_t gi = 0; gi < 4; ++gi) {
                        const std::size_t oc = gi * channels + ch;
                        pre[gi] = conv_x(x, bi, oc, j) + conv_h(h, bi, oc, j) + b[oc];
                    }
                    const double i = sig(pre[0] + wci[pe] * c[at]);
                    const double f = sig(pre[1] + wcf[pe] * c[at]);
                    const double cn = f * c[at] + i * std::tanh(pre[2]);
                    const double o = sig(pre[3] + wco[pe] * cn);
                    c_out[at] = cn;
                    h_out[at] = o * std::tanh(cn);
                }
    }
};

// Random small instance: B 1-3, C 1-4, F 3-9, K 3 or 5. Returns the largest
// absolute difference between the vectorized cell and the oracle over h and c.
inline double convlstm_oracle_gap(std::uint64_t seed) {
    using ad::Tensor;
    Rng rng(seed);
    const std::size_t batch = 1 + rng.below(3), ch = 1 + rng.below(4), feats = 3 + rng.below(7);
    const std::size_t k = rng.bernoulli(0.5) ? 3 : 5;
    const Tensor wx = random_tensor(rng, {4 * ch, 1, k}), wh = random_tensor(rng, {4 * ch, ch, k});
    const Tensor b = random_tensor(rng, {4 * ch});
    const Tensor wci = random_tensor(rng, {ch, feats}), wcf = random_tensor(rng, {ch, feats}),
                 wco = random_tensor(rng, {ch, feats});
    const Tensor x = random_tensor(rng, {batch, 1, feats}, -2, 2), h = random_tensor(rng, {batch, ch, feats}),
                 c = random_tensor(rng, {batch, ch, feats});

    ad::Graph g;
    const model::ConvLstmWeights w{g.constant(wx),  g.constant(wh),  g.constant(b),
                                   g.constant(wci), g.constant(wcf), g.constant(wco)};
    auto [hv, cv] = model::convlstm_cell(w, g.constant(x), g.constant(h), g.constant(c));

    const ConvLstmOracle o{batch, ch, feats, k, wx.values(), wh.values(), b.values(),
                           wci.values(), wcf.values(), wco.values()};
    std::vector<double> ho, co;
    o.step(x.values(), h.values(), c.values(), ho, co);
    double gap = 0.0;
    for (std::size_t i = 0; i < ho.size(); ++i)
        gap = std::max({gap, std::fabs(hv.value()[i] - ho[i]), std::fabs(cv.value()[i] - co[i])});
    return gap;
}

}  // namespace ulp::test
