// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>

#include "ulp/ad/graph.hpp"

namespace ulp::ad {

/// Builds a scalar loss from the given parameters inside a fresh graph.
using LossBuilder = std::function<Var(Graph&, const ParamStore&)>;

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::string worst_param;
    std::size_t worst_index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    std::size_t checked = 0;
};

/// Compares backward() gradients with central finite differences for every
/// element of every parameter. Relative error per component is
/// |a - n| / max(|a|, |n|, kGradCheckFloor). The floor keeps exactly-zero
/// gradients from being judged against pure finite-difference roundoff.
/// `epsilon` must lie in [1e-6, 1e-3].
inline constexpr double kGradCheckFloor = 1e-6;

GradCheckResult gradient_check(const LossBuilder& build, ParamStore params, double epsilon = 1e-5);

}  // namespace ulp::ad
