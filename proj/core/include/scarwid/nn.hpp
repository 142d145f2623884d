#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "scarwid/autodiff.hpp"
#include "scarwid/common.hpp"
#include "scarwid/image.hpp"

namespace scarwid::nn {

using autodiff::Tape;
using autodiff::Var;

struct Param {
    std::string name;
    Matrix value;
    Matrix grad;
    Matrix m;  // AdamW first moment
    Matrix v;  // AdamW second moment
    bool frozen = false;
};

/// Named parameters with stable addresses (graphs hold Param*).
class ParamStore {
public:
    Param* create(const std::string& name, int rows, int cols, double init_std, Rng& rng);
    Param* zeros(const std::string& name, int rows, int cols);
    Param* ones(const std::string& name, int rows, int cols);

    Param* find(const std::string& name) const;
    Param& at(const std::string& name) const;
    const std::vector<std::unique_ptr<Param>>& all() const { return params_; }

    void zero_grad();
    void set_frozen(const std::string& prefix, bool frozen);
    std::size_t count() const { return params_.size(); }

private:
    Param* add(const std::string& name, Matrix value);
    std::vector<std::unique_ptr<Param>> params_;
    std::map<std::string, Param*> by_name_;
};

/// Decoupled-weight-decay Adam. Frozen parameters are skipped entirely.
struct AdamW {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
    long step_count = 0;

    void step(ParamStore& params);
};

struct LayerNormParams {
    Param* gamma = nullptr;
    Param* beta = nullptr;
};

struct AttentionParams {
    Param* wq = nullptr;
    Param* bq = nullptr;
    Param* wk = nullptr;
    Param* bk = nullptr;
    Param* wv = nullptr;
    Param* bv = nullptr;
    Param* wo = nullptr;
    Param* bo = nullptr;
};

struct MlpParams {
    Param* w1 = nullptr;
    Param* b1 = nullptr;
    Param* w2 = nullptr;
    Param* b2 = nullptr;
};

struct BlockParams {
    LayerNormParams ln1;
    AttentionParams self_attn;
    LayerNormParams ln_cross;      // used only when cross_attn is present
    AttentionParams cross_attn;    // unset for plain encoder blocks
    LayerNormParams ln2;
    MlpParams mlp;
    bool has_cross = false;
};

LayerNormParams make_layer_norm(ParamStore& ps, const std::string& prefix, int width);
AttentionParams make_attention(ParamStore& ps, const std::string& prefix, int q_width,
                               int kv_width, int width, Rng& rng);
MlpParams make_mlp(ParamStore& ps, const std::string& prefix, int width, int hidden, Rng& rng);
BlockParams make_block(ParamStore& ps, const std::string& prefix, int width, int hidden,
                       bool with_cross, int context_width, Rng& rng);

Var linear(Tape& t, Var x, Param* w, Param* b);
Var layer_norm(Tape& t, Var x, const LayerNormParams& p);

/// Multi-head scaled dot-product attention; per-head softmax over keys.
/// `attn_capture`, when given, receives one (queries x keys) matrix per head.
Var attention(Tape& t, Var q_in, Var kv_in, const AttentionParams& p, int heads,
              bool causal, std::vector<Matrix>* attn_capture = nullptr,
              std::vector<Var>* attn_vars = nullptr);

/// Pre-norm residual block: self-attention, optional cross-attention onto
/// `context`, MLP.
Var transformer_block(Tape& t, Var x, const BlockParams& p, int heads, bool causal,
                      Var context = {}, std::vector<Matrix>* self_attn_capture = nullptr,
                      std::vector<Var>* cross_attn_vars = nullptr);

/// Sinusoidal position table (rows = positions).
Matrix positional_encoding(int max_len, int width);

/// Flatten an image into (grid*grid) rows of patch pixels (patch*patch*3).
Matrix patchify(const Image& img, int patch);

}  // namespace scarwid::nn
