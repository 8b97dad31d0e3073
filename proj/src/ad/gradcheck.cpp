// SPDX-License-Identifier: Apache-2.0
#include "ulp/ad/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "ulp/common/error.hpp"

namespace ulp::ad {

namespace {
double evaluate(const LossBuilder& build, const ParamStore& params) {
    Graph g;
    return build(g, params).value().item();
}
}  // namespace

GradCheckResult gradient_check(const LossBuilder& build, ParamStore params, double epsilon) {
    if (!(epsilon >= 1e-6 && epsilon <= 1e-3))
        throw Error(ErrorKind::Range, "tensor-autodiff", "gradient_check epsilon must lie in [1e-6, 1e-3]");

    ParamStore analytic;
    {
        Graph g;
        Var loss = build(g, params);
        g.backward(loss);
        analytic = g.grads_of(params);
    }

    GradCheckResult result;
    for (auto& [name, p] : params) {
        const Tensor& a = analytic.at(name);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double saved = p[i];
            p[i] = saved + epsilon;
            const double up = evaluate(build, params);
            p[i] = saved - epsilon;
            const double down = evaluate(build, params);
            p[i] = saved;

            const double numeric = (up - down) / (2.0 * epsilon);
            const double denom = std::max({std::fabs(a[i]), std::fabs(numeric), kGradCheckFloor});
            const double rel = std::fabs(a[i] - numeric) / denom;
            ++result.checked;
            if (rel > result.max_rel_error || result.checked == 1) {
                result.max_rel_error = rel;
                result.worst_param = name;
                result.worst_index = i;
                result.analytic = a[i];
                result.numeric = numeric;
            }
        }
    }
    return result;
}

}  // namespace ulp::ad
