#include "scarwid/nn.hpp"

#include <cmath>

namespace scarwid::nn {

Param* ParamStore::add(const std::string& name, Matrix value) {
    if (by_name_.count(name)) throw Error("duplicate parameter name: " + name);
    auto p = std::make_unique<Param>();
    p->name = name;
    p->grad = Matrix::Zero(value.rows(), value.cols());
    p->m = Matrix::Zero(value.rows(), value.cols());
    p->v = Matrix::Zero(value.rows(), value.cols());
    p->value = std::move(value);
    Param* raw = p.get();
    params_.push_back(std::move(p));
    by_name_[name] = raw;
    return raw;
}

Param* ParamStore::create(const std::string& name, int rows, int cols, double init_std, Rng& rng) {
    Matrix v(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) v(r, c) = rng.normal(0.0, init_std);
    return add(name, std::move(v));
}

Param* ParamStore::zeros(const std::string& name, int rows, int cols) {
    return add(name, Matrix::Zero(rows, cols));
}

Param* ParamStore::ones(const std::string& name, int rows, int cols) {
    return add(name, Matrix::Ones(rows, cols));
}

Param* ParamStore::find(const std::string& name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
}

Param& ParamStore::at(const std::string& name) const {
    Param* p = find(name);
    if (!p) throw Error("unknown parameter: " + name);
    return *p;
}

void ParamStore::zero_grad() {
    for (auto& p : params_) p->grad.setZero();
}

void ParamStore::set_frozen(const std::string& prefix, bool frozen) {
    bool any = false;
    for (auto& p : params_)
        if (p->name.rfind(prefix, 0) == 0) {
            p->frozen = frozen;
            any = true;
        }
    if (!any) throw Error("set_frozen: no parameters match prefix \"" + prefix + "\"");
}

void AdamW::step(ParamStore& params) {
    ++step_count;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
    for (auto& p : params.all()) {
        if (p->frozen) continue;
        p->m = beta1 * p->m + (1.0 - beta1) * p->grad;
        p->v = beta2 * p->v.array() + (1.0 - beta2) * p->grad.array().square();
        Matrix mhat = p->m / bc1;
        Matrix vhat = p->v / bc2;
        p->value.array() -=
            lr * (mhat.array() / (vhat.array().sqrt() + eps) + weight_decay * p->value.array());
    }
}

LayerNormParams make_layer_norm(ParamStore& ps, const std::string& prefix, int width) {
    return {ps.ones(prefix + ".gamma", 1, width), ps.zeros(prefix + ".beta", 1, width)};
}

AttentionParams make_attention(ParamStore& ps, const std::string& prefix, int q_width,
                               int kv_width, int width, Rng& rng) {
    const double sq = 1.0 / std::sqrt(static_cast<double>(q_width));
    const double skv = 1.0 / std::sqrt(static_cast<double>(kv_width));
    const double so = 1.0 / std::sqrt(static_cast<double>(width));
    AttentionParams p;
    p.wq = ps.create(prefix + ".wq", q_width, width, sq, rng);
    p.bq = ps.zeros(prefix + ".bq", 1, width);
    p.wk = ps.create(prefix + ".wk", kv_width, width, skv, rng);
    p.bk = ps.zeros(prefix + ".bk", 1, width);
    p.wv = ps.create(prefix + ".wv", kv_width, width, skv, rng);
    p.bv = ps.zeros(prefix + ".bv", 1, width);
    p.wo = ps.create(prefix + ".wo", width, width, so, rng);
    p.bo = ps.zeros(prefix + ".bo", 1, width);
    return p;
}

MlpParams make_mlp(ParamStore& ps, const std::string& prefix, int width, int hidden, Rng& rng) {
    MlpParams p;
    p.w1 = ps.create(prefix + ".w1", width, hidden, 1.0 / std::sqrt(width), rng);
    p.b1 = ps.zeros(prefix + ".b1", 1, hidden);
    p.w2 = ps.create(prefix + ".w2", hidden, width, 1.0 / std::sqrt(hidden), rng);
    p.b2 = ps.zeros(prefix + ".b2", 1, width);
    return p;
}

BlockParams make_block(ParamStore& ps, const std::string& prefix, int width, int hidden,
                       bool with_cross, int context_width, Rng& rng) {
    BlockParams b;
    b.ln1 = make_layer_norm(ps, prefix + ".ln1", width);
    b.self_attn = make_attention(ps, prefix + ".self", width, width, width, rng);
    if (with_cross) {
        b.has_cross = true;
        b.ln_cross = make_layer_norm(ps, prefix + ".ln_cross", width);
        b.cross_attn = make_attention(ps, prefix + ".cross", width, context_width, width, rng);
    }
    b.ln2 = make_layer_norm(ps, prefix + ".ln2", width);
    b.mlp = make_mlp(ps, prefix + ".mlp", width, hidden, rng);
    return b;
}

Var linear(Tape& t, Var x, Param* w, Param* b) {
    Var wx = t.matmul(x, t.param(w->value, &w->grad));
    if (!b) return wx;
    return t.add_row_broadcast(wx, t.param(b->value, &b->grad));
}

Var layer_norm(Tape& t, Var x, const LayerNormParams& p) {
    return t.layer_norm_rows(x, t.param(p.gamma->value, &p.gamma->grad),
                             t.param(p.beta->value, &p.beta->grad));
}

Var attention(Tape& t, Var q_in, Var kv_in, const AttentionParams& p, int heads, bool causal,
              std::vector<Matrix>* attn_capture, std::vector<Var>* attn_vars) {
    const int width = static_cast<int>(p.wq->value.cols());
    if (width % heads != 0) throw Error("attention width not divisible by head count");
    const int hd = width / heads;
    const double inv_scale = 1.0 / std::sqrt(static_cast<double>(hd));

    Var q = linear(t, q_in, p.wq, p.bq);
    Var k = linear(t, kv_in, p.wk, p.bk);
    Var v = linear(t, kv_in, p.wv, p.bv);

    const Eigen::Index m = t.value(q).rows();
    const Eigen::Index l = t.value(k).rows();
    Var mask{};
    if (causal) {
        Matrix mm = Matrix::Zero(m, l);
        for (Eigen::Index r = 0; r < m; ++r)
            for (Eigen::Index c2 = r + 1; c2 < l; ++c2) mm(r, c2) = -1e9;
        mask = t.leaf(std::move(mm));
    }

    Var out{};
    for (int h = 0; h < heads; ++h) {
        Var qh = t.slice_cols(q, h * hd, hd);
        Var kh = t.slice_cols(k, h * hd, hd);
        Var vh = t.slice_cols(v, h * hd, hd);
        Var scores = t.scale(t.matmul_nt(qh, kh), inv_scale);
        if (mask.valid()) scores = t.add(scores, mask);
        Var weights = t.softmax_rows(scores);
        if (attn_capture) attn_capture->push_back(t.value(weights));
        if (attn_vars) attn_vars->push_back(weights);
        Var oh = t.matmul(weights, vh);
        out = out.valid() ? t.concat_cols(out, oh) : oh;
    }
    return linear(t, out, p.wo, p.bo);
}

Var transformer_block(Tape& t, Var x, const BlockParams& p, int heads, bool causal, Var context,
                      std::vector<Matrix>* self_attn_capture,
                      std::vector<Var>* cross_attn_vars) {
    Var ln_x = layer_norm(t, x, p.ln1);
    Var h = t.add(x, attention(t, ln_x, ln_x, p.self_attn, heads, causal, self_attn_capture));
    if (p.has_cross) {
        if (!context.valid()) throw Error("transformer_block: cross block needs a context");
        Var q = layer_norm(t, h, p.ln_cross);
        h = t.add(h, attention(t, q, context, p.cross_attn, heads, false, nullptr,
                               cross_attn_vars));
    }
    Var m = linear(t, t.gelu(linear(t, layer_norm(t, h, p.ln2), p.mlp.w1, p.mlp.b1)), p.mlp.w2,
                   p.mlp.b2);
    return t.add(h, m);
}

Matrix positional_encoding(int max_len, int width) {
    Matrix pe(max_len, width);
    for (int pos = 0; pos < max_len; ++pos)
        for (int i = 0; i < width; ++i) {
            double angle = pos / std::pow(10000.0, 2.0 * (i / 2) / width);
            pe(pos, i) = (i % 2 == 0) ? std::sin(angle) : std::cos(angle);
        }
    return pe;
}

Matrix patchify(const Image& img, int patch) {
    if (img.height % patch != 0 || img.width % patch != 0)
        throw Error("patchify: image size " + std::to_string(img.height) + "x" +
                    std::to_string(img.width) + " not divisible by patch " +
                    std::to_string(patch));
    const int gh = img.height / patch;
    const int gw = img.width / patch;
    Matrix out(gh * gw, patch * patch * 3);
    for (int gy = 0; gy < gh; ++gy)
        for (int gx = 0; gx < gw; ++gx) {
            int row = gy * gw + gx;
            int col = 0;
            for (int py = 0; py < patch; ++py)
                for (int px = 0; px < patch; ++px)
                    for (int c = 0; c < 3; ++c)
                        out(row, col++) = img.at(gy * patch + py, gx * patch + px, c);
        }
    return out;
}

}  // namespace scarwid::nn
