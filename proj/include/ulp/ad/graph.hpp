// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ulp/ad/tensor.hpp"

namespace ulp::ad {

class Graph;

/// Handle to a node of a Graph. Cheap to copy; only valid while its graph lives.
struct Var {
    Graph* graph = nullptr;
    std::uint32_t id = 0;

    const Tensor& value() const;
    const Shape& shape() const { return value().shape(); }
};

/// Append-only reverse-mode tape.
///
/// Nodes are stored in creation order, so inputs always precede their
/// consumers and backward() simply walks the tape in reverse. A graph is
/// single-use for differentiation: calling backward() a second time throws
/// a contract error instead of silently double-accumulating.
class Graph {
public:
    using BackwardFn = std::function<void(Graph&, std::uint32_t self)>;

    Graph() = default;
    Graph(const Graph&) = delete;
    Graph& operator=(const Graph&) = delete;

    /// Owned leaf that does not require a gradient.
    Var constant(Tensor value);
    /// Owned leaf that requires a gradient.
    Var variable(Tensor value);
    /// Borrowed leaf for a model parameter; the tensor must outlive the graph.
    /// Binding the same tensor twice returns the same node.
    Var param(const Tensor& value);

    /// Used by op implementations.
    Var push(std::string_view op, std::vector<std::uint32_t> inputs, Tensor value, BackwardFn backward);

    const Tensor& value(std::uint32_t id) const;
    const Tensor& value(Var v) const { return value(v.id); }
    std::string_view op(std::uint32_t id) const { return nodes_.at(id).op; }
    const std::vector<std::uint32_t>& inputs(std::uint32_t id) const { return nodes_.at(id).inputs; }
    bool requires_grad(std::uint32_t id) const { return nodes_.at(id).requires_grad; }
    std::size_t size() const noexcept { return nodes_.size(); }

    /// Populates gradients of every requires-grad node reachable from `loss`
    /// (which must hold exactly one element). Unreachable gradients stay zero.
    void backward(Var loss);
    bool has_backward() const noexcept { return backward_done_; }

    /// Gradient of a node; only available after backward().
    const Tensor& grad(Var v) const;
    /// Gradient accumulated for a bound parameter, zeros if it was never bound.
    Tensor grad_of(const Tensor& param) const;
    /// Gradients for every entry of `params`, keyed by name.
    ParamStore grads_of(const ParamStore& params) const;

    /// Mutable gradient buffer for op backward functions.
    Tensor& grad_buffer(std::uint32_t id);

private:
    struct Node {
        std::string_view op;
        std::vector<std::uint32_t> inputs;
        Tensor owned;
        const Tensor* borrowed = nullptr;
        bool requires_grad = false;
        Tensor grad;
        BackwardFn backward;

        const Tensor& val() const { return borrowed ? *borrowed : owned; }
    };

    std::vector<Node> nodes_;
    std::unordered_map<const Tensor*, std::uint32_t> param_ids_;
    bool backward_done_ = false;
};

}  // namespace ulp::ad
