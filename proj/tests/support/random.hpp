// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ulp/ad/tensor.hpp"
#include "ulp/common/rng.hpp"

namespace ulp::test {

inline ad::Tensor random_tensor(Rng& rng, ad::Shape shape, double lo = -1.0, double hi = 1.0) {
    ad::Tensor t(std::move(shape));
    for (auto& v : t.data()) v = rng.uniform(lo, hi);
    return t;
}

// Values in +-[gap, hi]: keeps piecewise ops away from their kinks.
inline ad::Tensor random_away_from_zero(Rng& rng, ad::Shape shape, double gap = 0.1, double hi = 1.0) {
    ad::Tensor t(std::move(shape));
    for (auto& v : t.data()) v = (rng.bernoulli(0.5) ? 1.0 : -1.0) * rng.uniform(gap, hi);
    return t;
}

}  // namespace ulp::test
