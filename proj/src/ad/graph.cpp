// SPDX-License-Identifier: Apache-2.0
#include "ulp/ad/graph.hpp"

#include <string>

#include "ulp/common/error.hpp"

namespace ulp::ad {

namespace {
constexpr const char* kModule = "tensor-autodiff";
}

const Tensor& Var::value() const {
    if (!graph) throw Error(ErrorKind::Contract, kModule, "unbound variable");
    return graph->value(id);
}

Var Graph::constant(Tensor value) {
    Node n;
    n.op = "constant";
    n.owned = std::move(value);
    nodes_.push_back(std::move(n));
    return {this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Graph::variable(Tensor value) {
    Var v = constant(std::move(value));
    nodes_.back().op = "variable";
    nodes_.back().requires_grad = true;
    return v;
}

Var Graph::param(const Tensor& value) {
    if (auto it = param_ids_.find(&value); it != param_ids_.end()) return {this, it->second};
    Node n;
    n.op = "param";
    n.borrowed = &value;
    n.requires_grad = true;
    nodes_.push_back(std::move(n));
    const auto id = static_cast<std::uint32_t>(nodes_.size() - 1);
    param_ids_.emplace(&value, id);
    return {this, id};
}

Var Graph::push(std::string_view op, std::vector<std::uint32_t> inputs, Tensor value, BackwardFn backward) {
    if (backward_done_) throw Error(ErrorKind::Contract, kModule, "cannot extend a graph after backward()");
    if (!value.all_finite())
        throw Error(ErrorKind::Numeric, kModule, "non-finite value produced by " + std::string(op));
    Node n;
    n.op = op;
    n.inputs = std::move(inputs);
    n.owned = std::move(value);
    for (auto in : n.inputs) n.requires_grad = n.requires_grad || nodes_.at(in).requires_grad;
    if (n.requires_grad) n.backward = std::move(backward);
    nodes_.push_back(std::move(n));
    return {this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

const Tensor& Graph::value(std::uint32_t id) const { return nodes_.at(id).val(); }

void Graph::backward(Var loss) {
    if (loss.graph != this) throw Error(ErrorKind::Contract, kModule, "loss belongs to another graph");
    if (backward_done_) throw Error(ErrorKind::Contract, kModule, "backward() already ran on this graph");
    const Tensor& lv = value(loss.id);
    if (lv.size() != 1)
        throw Error(ErrorKind::Contract, kModule, "loss must be scalar, got shape " + to_string(lv.shape()));

    for (auto& n : nodes_)
        if (n.requires_grad) n.grad = Tensor::zeros(n.val().shape());
    backward_done_ = true;
    if (!nodes_[loss.id].requires_grad) return;

    nodes_[loss.id].grad[0] = 1.0;
    for (std::uint32_t i = loss.id + 1; i-- > 0;) {
        Node& n = nodes_[i];
        if (n.requires_grad && n.backward) n.backward(*this, i);
    }
}

const Tensor& Graph::grad(Var v) const {
    if (!backward_done_) throw Error(ErrorKind::Contract, kModule, "gradients requested before backward()");
    const Node& n = nodes_.at(v.id);
    if (!n.requires_grad) throw Error(ErrorKind::Contract, kModule, "node does not require a gradient");
    return n.grad;
}

Tensor Graph::grad_of(const Tensor& param) const {
    auto it = param_ids_.find(&param);
    if (it == param_ids_.end() || !backward_done_) return Tensor::zeros(param.shape());
    return nodes_[it->second].grad;
}

ParamStore Graph::grads_of(const ParamStore& params) const {
    ParamStore out;
    for (const auto& [name, p] : params) out.emplace(name, grad_of(p));
    return out;
}

Tensor& Graph::grad_buffer(std::uint32_t id) { return nodes_.at(id).grad; }

}  // namespace ulp::ad
