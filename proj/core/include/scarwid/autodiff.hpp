#pragma once

#include <cstdint>
#include <vector>

#include "scarwid/common.hpp"

namespace scarwid::autodiff {

/// Handle into a Tape.
struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

/// Minimal reverse-mode tape over Eigen matrices. A fresh graph is built per
/// forward pass; backward() fills node gradients and accumulates parameter
/// gradients into the sinks registered via param().
class Tape {
public:
    Var leaf(Matrix value);
    Var param(const Matrix& value, Matrix* grad_sink);

    Var matmul(Var a, Var b);     // A * B
    Var matmul_nt(Var a, Var b);  // A * B^T
    Var add(Var a, Var b);        // same shape
    Var sub(Var a, Var b);
    Var cwise_mul(Var a, Var b);
    Var scale(Var a, double c);
    Var add_scalar(Var a, double c);
    Var add_row_broadcast(Var a, Var row);  // A + replicate(row)
    Var softmax_rows(Var a);                // stable, per-row max subtraction
    Var gelu(Var a);                        // exact erf form
    Var relu(Var a);                        // subgradient 0 at the kink
    Var sigmoid(Var a);
    Var layer_norm_rows(Var a, Var gamma, Var beta, double eps = 1e-5);
    Var mean_rows(Var a);   // 1 x d
    Var first_row(Var a);   // 1 x d
    Var concat_cols(Var a, Var b);
    Var slice_cols(Var a, int offset, int count);
    Var gather_rows(Var table, const std::vector<int>& rows);
    Var sum_all(Var a);  // 1 x 1

    /// Token-level negative log-likelihood: sum over rows of
    /// (logsumexp(row) - logit[row, target]). 1 x 1 output.
    Var nll_loss(Var logits, const std::vector<int>& targets);

    /// Numerically stable binary cross-entropy on a single logit. 1 x 1.
    Var bce_with_logits(Var logit, double target);

    /// Row-wise softmax probabilities cached by nll_loss (rows x vocab).
    const Matrix& cached_probs(Var nll_node) const;

    const Matrix& value(Var v) const;
    const Matrix& grad(Var v) const;

    /// Seeds d(root)/d(root) = 1 (root must be 1x1), sweeps the tape in
    /// reverse, accumulates into parameter grad sinks.
    void backward(Var root);

    void clear();
    std::size_t size() const { return nodes_.size(); }

private:
    enum class Op {
        leaf, param, matmul, matmul_nt, add, sub, cwise_mul, scale, add_scalar,
        add_row, softmax_rows, gelu, relu, sigmoid, layer_norm, mean_rows,
        first_row, concat_cols, slice_cols, gather_rows, sum_all, nll, bce
    };

    struct Node {
        Op op;
        int a = -1, b = -1, c = -1;
        Matrix value;
        Matrix grad;
        Matrix aux;                 // op-specific cache (softmax probs, xhat, ...)
        Matrix aux2;
        double scalar = 0.0;
        std::vector<int> indices;
        Matrix* grad_sink = nullptr;
    };

    Var push(Node node);
    Node& at(Var v);
    const Node& at(Var v) const;

    std::vector<Node> nodes_;
};

}  // namespace scarwid::autodiff
