#include "scarwid/autodiff.hpp"

#include <cmath>

namespace scarwid::autodiff {

Var Tape::push(Node node) {
    nodes_.push_back(std::move(node));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

Tape::Node& Tape::at(Var v) {
    if (!v.valid() || v.id >= static_cast<int>(nodes_.size())) throw Error("invalid tape var");
    return nodes_[v.id];
}

const Tape::Node& Tape::at(Var v) const {
    if (!v.valid() || v.id >= static_cast<int>(nodes_.size())) throw Error("invalid tape var");
    return nodes_[v.id];
}

const Matrix& Tape::value(Var v) const { return at(v).value; }
const Matrix& Tape::grad(Var v) const { return at(v).grad; }

void Tape::clear() { nodes_.clear(); }

Var Tape::leaf(Matrix value) {
    Node n;
    n.op = Op::leaf;
    n.value = std::move(value);
    return push(std::move(n));
}

Var Tape::param(const Matrix& value, Matrix* grad_sink) {
    Node n;
    n.op = Op::param;
    n.value = value;
    n.grad_sink = grad_sink;
    return push(std::move(n));
}

Var Tape::matmul(Var a, Var b) {
    if (at(a).value.cols() != at(b).value.rows())
        throw Error("matmul shape mismatch");
    Node n;
    n.op = Op::matmul;
    n.a = a.id;
    n.b = b.id;
    n.value = at(a).value * at(b).value;
    return push(std::move(n));
}

Var Tape::matmul_nt(Var a, Var b) {
    if (at(a).value.cols() != at(b).value.cols())
        throw Error("matmul_nt shape mismatch");
    Node n;
    n.op = Op::matmul_nt;
    n.a = a.id;
    n.b = b.id;
    n.value = at(a).value * at(b).value.transpose();
    return push(std::move(n));
}

Var Tape::add(Var a, Var b) {
    if (at(a).value.rows() != at(b).value.rows() || at(a).value.cols() != at(b).value.cols())
        throw Error("add shape mismatch");
    Node n;
    n.op = Op::add;
    n.a = a.id;
    n.b = b.id;
    n.value = at(a).value + at(b).value;
    return push(std::move(n));
}

Var Tape::sub(Var a, Var b) {
    if (at(a).value.rows() != at(b).value.rows() || at(a).value.cols() != at(b).value.cols())
        throw Error("sub shape mismatch");
    Node n;
    n.op = Op::sub;
    n.a = a.id;
    n.b = b.id;
    n.value = at(a).value - at(b).value;
    return push(std::move(n));
}

Var Tape::cwise_mul(Var a, Var b) {
    Node n;
    n.op = Op::cwise_mul;
    n.a = a.id;
    n.b = b.id;
    n.value = at(a).value.cwiseProduct(at(b).value);
    return push(std::move(n));
}

Var Tape::scale(Var a, double c) {
    Node n;
    n.op = Op::scale;
    n.a = a.id;
    n.scalar = c;
    n.value = at(a).value * c;
    return push(std::move(n));
}

Var Tape::add_scalar(Var a, double c) {
    Node n;
    n.op = Op::add_scalar;
    n.a = a.id;
    n.scalar = c;
    n.value = at(a).value.array() + c;
    return push(std::move(n));
}

Var Tape::add_row_broadcast(Var a, Var row) {
    if (at(row).value.rows() != 1 || at(row).value.cols() != at(a).value.cols())
        throw Error("add_row_broadcast shape mismatch");
    Node n;
    n.op = Op::add_row;
    n.a = a.id;
    n.b = row.id;
    n.value = at(a).value.rowwise() + at(row).value.row(0);
    return push(std::move(n));
}

Var Tape::softmax_rows(Var a) {
    const Matrix& x = at(a).value;
    Matrix y(x.rows(), x.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double m = x.row(r).maxCoeff();
        Eigen::ArrayXd e = (x.row(r).array() - m).exp();
        y.row(r) = (e / e.sum()).matrix();
    }
    Node n;
    n.op = Op::softmax_rows;
    n.a = a.id;
    n.value = std::move(y);
    return push(std::move(n));
}

Var Tape::gelu(Var a) {
    const Matrix& x = at(a).value;
    Matrix y = x.unaryExpr([](double v) { return 0.5 * v * (1.0 + std::erf(v * M_SQRT1_2)); });
    Node n;
    n.op = Op::gelu;
    n.a = a.id;
    n.value = std::move(y);
    return push(std::move(n));
}

Var Tape::relu(Var a) {
    Node n;
    n.op = Op::relu;
    n.a = a.id;
    n.value = at(a).value.cwiseMax(0.0);
    return push(std::move(n));
}

Var Tape::sigmoid(Var a) {
    const Matrix& x = at(a).value;
    Matrix y = x.unaryExpr([](double v) {
        return v >= 0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
    });
    Node n;
    n.op = Op::sigmoid;
    n.a = a.id;
    n.value = std::move(y);
    return push(std::move(n));
}

Var Tape::layer_norm_rows(Var a, Var gamma, Var beta, double eps) {
    const Matrix& x = at(a).value;
    if (at(gamma).value.rows() != 1 || at(gamma).value.cols() != x.cols() ||
        at(beta).value.rows() != 1 || at(beta).value.cols() != x.cols())
        throw Error("layer_norm shape mismatch");
    Matrix xhat(x.rows(), x.cols());
    Matrix inv_std(x.rows(), 1);
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        double mu = x.row(r).mean();
        double var = (x.row(r).array() - mu).square().mean();
        double is = 1.0 / std::sqrt(var + eps);
        inv_std(r, 0) = is;
        xhat.row(r) = ((x.row(r).array() - mu) * is).matrix();
    }
    Node n;
    n.op = Op::layer_norm;
    n.a = a.id;
    n.b = gamma.id;
    n.c = beta.id;
    n.value = (xhat.array().rowwise() * at(gamma).value.row(0).array()).rowwise() +
              at(beta).value.row(0).array();
    n.aux = std::move(xhat);
    n.aux2 = std::move(inv_std);
    return push(std::move(n));
}

Var Tape::mean_rows(Var a) {
    Node n;
    n.op = Op::mean_rows;
    n.a = a.id;
    n.value = at(a).value.colwise().mean();
    return push(std::move(n));
}

Var Tape::first_row(Var a) {
    Node n;
    n.op = Op::first_row;
    n.a = a.id;
    n.value = at(a).value.row(0);
    return push(std::move(n));
}

Var Tape::concat_cols(Var a, Var b) {
    if (at(a).value.rows() != at(b).value.rows()) throw Error("concat_cols shape mismatch");
    Node n;
    n.op = Op::concat_cols;
    n.a = a.id;
    n.b = b.id;
    n.value.resize(at(a).value.rows(), at(a).value.cols() + at(b).value.cols());
    n.value << at(a).value, at(b).value;
    return push(std::move(n));
}

Var Tape::slice_cols(Var a, int offset, int count) {
    if (offset < 0 || count <= 0 || offset + count > at(a).value.cols())
        throw Error("slice_cols out of range");
    Node n;
    n.op = Op::slice_cols;
    n.a = a.id;
    n.scalar = offset;
    n.value = at(a).value.middleCols(offset, count);
    return push(std::move(n));
}

Var Tape::gather_rows(Var table, const std::vector<int>& rows) {
    const Matrix& t = at(table).value;
    Matrix v(static_cast<Eigen::Index>(rows.size()), t.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < 0 || rows[i] >= t.rows()) throw Error("gather_rows index out of range");
        v.row(static_cast<Eigen::Index>(i)) = t.row(rows[i]);
    }
    Node n;
    n.op = Op::gather_rows;
    n.a = table.id;
    n.indices = rows;
    n.value = std::move(v);
    return push(std::move(n));
}

Var Tape::sum_all(Var a) {
    Node n;
    n.op = Op::sum_all;
    n.a = a.id;
    n.value = Matrix::Constant(1, 1, at(a).value.sum());
    return push(std::move(n));
}

Var Tape::nll_loss(Var logits, const std::vector<int>& targets) {
    const Matrix& z = at(logits).value;
    if (static_cast<Eigen::Index>(targets.size()) != z.rows())
        throw Error("nll_loss: one target per row required");
    Matrix probs(z.rows(), z.cols());
    double loss = 0.0;
    for (Eigen::Index r = 0; r < z.rows(); ++r) {
        int t = targets[r];
        if (t < 0 || t >= z.cols()) throw Error("nll_loss target out of range");
        double m = z.row(r).maxCoeff();
        Eigen::ArrayXd e = (z.row(r).array() - m).exp();
        double s = e.sum();
        probs.row(r) = (e / s).matrix();
        loss += (m + std::log(s)) - z(r, t);
    }
    Node n;
    n.op = Op::nll;
    n.a = logits.id;
    n.indices = targets;
    n.aux = std::move(probs);
    n.value = Matrix::Constant(1, 1, loss);
    return push(std::move(n));
}

Var Tape::bce_with_logits(Var logit, double target) {
    const Matrix& z = at(logit).value;
    if (z.rows() != 1 || z.cols() != 1) throw Error("bce_with_logits expects a 1x1 logit");
    double v = z(0, 0);
    double loss = std::max(v, 0.0) - v * target + std::log1p(std::exp(-std::abs(v)));
    Node n;
    n.op = Op::bce;
    n.a = logit.id;
    n.scalar = target;
    n.value = Matrix::Constant(1, 1, loss);
    return push(std::move(n));
}

const Matrix& Tape::cached_probs(Var nll_node) const {
    const Node& n = at(nll_node);
    if (n.op != Op::nll) throw Error("cached_probs: not an nll node");
    return n.aux;
}

void Tape::backward(Var root) {
    Node& r = at(root);
    if (r.value.rows() != 1 || r.value.cols() != 1)
        throw Error("backward root must be 1x1");
    for (Node& n : nodes_)
        n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
    r.grad(0, 0) = 1.0;

    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
        Node& n = nodes_[i];
        if (n.grad.isZero(0.0)) continue;
        const Matrix& g = n.grad;
        switch (n.op) {
            case Op::leaf:
                break;
            case Op::param:
                if (n.grad_sink) *n.grad_sink += g;
                break;
            case Op::matmul:
                nodes_[n.a].grad.noalias() += g * nodes_[n.b].value.transpose();
                nodes_[n.b].grad.noalias() += nodes_[n.a].value.transpose() * g;
                break;
            case Op::matmul_nt:
                nodes_[n.a].grad.noalias() += g * nodes_[n.b].value;
                nodes_[n.b].grad.noalias() += g.transpose() * nodes_[n.a].value;
                break;
            case Op::add:
                nodes_[n.a].grad += g;
                nodes_[n.b].grad += g;
                break;
            case Op::sub:
                nodes_[n.a].grad += g;
                nodes_[n.b].grad -= g;
                break;
            case Op::cwise_mul:
                nodes_[n.a].grad += g.cwiseProduct(nodes_[n.b].value);
                nodes_[n.b].grad += g.cwiseProduct(nodes_[n.a].value);
                break;
            case Op::scale:
                nodes_[n.a].grad += g * n.scalar;
                break;
            case Op::add_scalar:
                nodes_[n.a].grad += g;
                break;
            case Op::add_row:
                nodes_[n.a].grad += g;
                nodes_[n.b].grad += g.colwise().sum();
                break;
            case Op::softmax_rows: {
                const Matrix& y = n.value;
                Matrix& da = nodes_[n.a].grad;
                for (Eigen::Index r2 = 0; r2 < y.rows(); ++r2) {
                    double dot = g.row(r2).dot(y.row(r2));
                    da.row(r2) += ((g.row(r2).array() - dot) * y.row(r2).array()).matrix();
                }
                break;
            }
            case Op::gelu: {
                const Matrix& x = nodes_[n.a].value;
                Matrix d = x.unaryExpr([](double v) {
                    double cdf = 0.5 * (1.0 + std::erf(v * M_SQRT1_2));
                    double pdf = std::exp(-0.5 * v * v) / std::sqrt(2.0 * M_PI);
                    return cdf + v * pdf;
                });
                nodes_[n.a].grad += g.cwiseProduct(d);
                break;
            }
            case Op::relu: {
                const Matrix& x = nodes_[n.a].value;
                nodes_[n.a].grad +=
                    g.cwiseProduct(x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
                break;
            }
            case Op::sigmoid: {
                const Matrix& y = n.value;
                nodes_[n.a].grad += g.cwiseProduct(
                    y.cwiseProduct(Matrix::Ones(y.rows(), y.cols()) - y));
                break;
            }
            case Op::layer_norm: {
                const Matrix& xhat = n.aux;
                const Matrix& inv_std = n.aux2;
                const Matrix& gamma = nodes_[n.b].value;
                nodes_[n.b].grad += g.cwiseProduct(xhat).colwise().sum();
                nodes_[n.c].grad += g.colwise().sum();
                const Eigen::Index d = xhat.cols();
                for (Eigen::Index r2 = 0; r2 < xhat.rows(); ++r2) {
                    Eigen::RowVectorXd dxhat =
                        g.row(r2).cwiseProduct(gamma.row(0));
                    double m1 = dxhat.mean();
                    double m2 = dxhat.cwiseProduct(xhat.row(r2)).mean();
                    nodes_[n.a].grad.row(r2) +=
                        inv_std(r2, 0) *
                        (dxhat.array() - m1 - xhat.row(r2).array() * m2).matrix();
                    (void)d;
                }
                break;
            }
            case Op::mean_rows: {
                double inv = 1.0 / static_cast<double>(nodes_[n.a].value.rows());
                nodes_[n.a].grad += (Matrix::Ones(nodes_[n.a].value.rows(), 1) * g) * inv;
                break;
            }
            case Op::first_row:
                nodes_[n.a].grad.row(0) += g.row(0);
                break;
            case Op::concat_cols: {
                Eigen::Index ca = nodes_[n.a].value.cols();
                nodes_[n.a].grad += g.leftCols(ca);
                nodes_[n.b].grad += g.rightCols(g.cols() - ca);
                break;
            }
            case Op::slice_cols: {
                int off = static_cast<int>(n.scalar);
                nodes_[n.a].grad.middleCols(off, n.value.cols()) += g;
                break;
            }
            case Op::gather_rows:
                for (std::size_t k = 0; k < n.indices.size(); ++k)
                    nodes_[n.a].grad.row(n.indices[k]) += g.row(static_cast<Eigen::Index>(k));
                break;
            case Op::sum_all:
                nodes_[n.a].grad.array() += g(0, 0);
                break;
            case Op::nll: {
                Matrix d = n.aux;  // softmax probs
                for (Eigen::Index r2 = 0; r2 < d.rows(); ++r2) d(r2, n.indices[r2]) -= 1.0;
                nodes_[n.a].grad += g(0, 0) * d;
                break;
            }
            case Op::bce: {
                double z = nodes_[n.a].value(0, 0);
                double s = z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
                nodes_[n.a].grad(0, 0) += g(0, 0) * (s - n.scalar);
                break;
            }
        }
    }
}

}  // namespace scarwid::autodiff
