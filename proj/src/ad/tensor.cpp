// SPDX-License-Identifier: Apache-2.0
#include "ulp/ad/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "ulp/common/error.hpp"

namespace ulp::ad {

std::size_t numel(const Shape& shape) {
    std::size_t n = 1;
    for (auto d : shape) n *= d;
    return n;
}

std::string to_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

static void check_shape(const Shape& shape) {
    if (shape.empty()) throw Error(ErrorKind::Dimension, "tensor-autodiff", "tensor needs at least one axis");
    for (auto d : shape)
        if (d == 0) throw Error(ErrorKind::Dimension, "tensor-autodiff", "zero-length axis in shape " + to_string(shape));
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
    check_shape(shape_);
    data_.assign(numel(shape_), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    check_shape(shape_);
    if (numel(shape_) != data_.size())
        throw Error(ErrorKind::Dimension, "tensor-autodiff",
                    "shape " + to_string(shape_) + " needs " + std::to_string(numel(shape_)) + " values, got " +
                        std::to_string(data_.size()));
}

Tensor Tensor::filled(Shape shape, double value) {
    Tensor t(std::move(shape));
    std::fill(t.data_.begin(), t.data_.end(), value);
    return t;
}

double Tensor::item() const {
    if (data_.size() != 1)
        throw Error(ErrorKind::Dimension, "tensor-autodiff", "item() on tensor of shape " + to_string(shape_));
    return data_[0];
}

Tensor Tensor::reshaped(Shape shape) const { return Tensor(std::move(shape), data_); }

bool Tensor::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace ulp::ad
