// SPDX-License-Identifier: Apache-2.0
#include "ulp/ad/adam.hpp"

#include <cmath>

#include "ulp/common/error.hpp"

namespace ulp::ad {

namespace {
constexpr const char* kModule = "tensor-autodiff";
}

AdamState::AdamState(AdamConfig config) : config_(config) {
    if (!(config_.beta1 > 0.0 && config_.beta1 < 1.0) || !(config_.beta2 > 0.0 && config_.beta2 < 1.0))
        throw Error(ErrorKind::Config, kModule, "Adam betas must lie in (0, 1)");
    if (!(config_.epsilon > 0.0)) throw Error(ErrorKind::Config, kModule, "Adam epsilon must be positive");
    if (!(config_.lr > 0.0)) throw Error(ErrorKind::Config, kModule, "Adam learning rate must be positive");
}

void AdamState::step(ParamStore& params, const ParamStore& grads) {
    for (const auto& [name, p] : params) {
        auto g = grads.find(name);
        if (g == grads.end()) throw Error(ErrorKind::Contract, kModule, "missing gradient for parameter '" + name + "'");
        if (g->second.shape() != p.shape())
            throw Error(ErrorKind::Contract, kModule,
                        "gradient for '" + name + "' has shape " + to_string(g->second.shape()) + ", parameter " +
                            to_string(p.shape()));
    }

    ++step_count_;
    const auto t = static_cast<double>(step_count_);
    const double bc1 = 1.0 - std::pow(config_.beta1, t);
    const double bc2 = 1.0 - std::pow(config_.beta2, t);

    for (auto& [name, p] : params) {
        const Tensor& g = grads.at(name);
        auto [mit, m_new] = m_.try_emplace(name, p.shape());
        auto [vit, v_new] = v_.try_emplace(name, p.shape());
        Tensor& m = mit->second;
        Tensor& v = vit->second;
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
            v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            p[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        }
    }
}

}  // namespace ulp::ad
