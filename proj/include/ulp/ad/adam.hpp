// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "ulp/ad/tensor.hpp"

namespace ulp::ad {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Optimizer state: hyperparameters, step counter and per-parameter first
/// and second moment estimates (zero until a parameter's first update).
class AdamState {
public:
    explicit AdamState(AdamConfig config = {});

    const AdamConfig& config() const noexcept { return config_; }
    std::uint64_t step_count() const noexcept { return step_count_; }
    const ParamStore& first_moments() const noexcept { return m_; }
    const ParamStore& second_moments() const noexcept { return v_; }

    /// One bias-corrected Adam update of every entry of `params`. `grads`
    /// must hold a same-shaped gradient for each parameter name.
    void step(ParamStore& params, const ParamStore& grads);

private:
    AdamConfig config_;
    std::uint64_t step_count_ = 0;
    ParamStore m_;
    ParamStore v_;
};

inline void adam_step(ParamStore& params, const ParamStore& grads, AdamState& state) { state.step(params, grads); }

}  // namespace ulp::ad
