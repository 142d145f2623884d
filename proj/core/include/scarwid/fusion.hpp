#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "scarwid/common.hpp"
#include "scarwid/image.hpp"
#include "scarwid/nn.hpp"
#include "scarwid/tokenizer.hpp"

namespace scarwid {

/// M x d_i patch-token embeddings.
using ImageEmbedding = Matrix;
/// L x d_t token embeddings.
using TextEmbedding = Matrix;
/// 1 x d_e fused embedding row.
using CrossModalEmbedding = Eigen::RowVectorXd;

/// Trainable weights of the fusion cross-attention: queries from the image,
/// keys/values from the text.
struct CrossAttentionParams {
    Matrix wq;  // d_i x d
    Matrix wk;  // d_t x d
    Matrix wv;  // d_t x d
    int heads = 2;
};

struct CrossAttentionResult {
    Matrix output;                 // M x d; per head, rows are convex
                                   // combinations of that head's value rows
    std::vector<Matrix> weights;   // per head, M x L row-stochastic
};

/// Stable scaled dot-product cross-attention on plain matrices. Per-head
/// scale is sqrt(d / heads). Attention weights are retained for
/// explainability.
CrossAttentionResult cross_attention(const ImageEmbedding& image_tokens,
                                     const TextEmbedding& text_tokens,
                                     const CrossAttentionParams& params);

enum class FusionInputMode { image_text, image_only, text_only };
const char* to_string(FusionInputMode mode);
FusionInputMode fusion_mode_from_string(const std::string& s);

enum class Pooling { mean, first_token };

struct FusionConfig {
    int image_size = 224;
    int patch = 16;
    int width = 64;           // encoder token width (d_i = d_t)
    int encoder_blocks = 2;
    int encoder_heads = 2;
    int attn_dim = 64;        // d of the cross-attention projections
    int cross_heads = 2;
    int projection_dim = 256; // d_e
    Pooling pooling = Pooling::mean;
    bool query_residual = true;
    bool normalize_embedding = false;
    int max_text_len = 40;
    int mlp_ratio = 4;

    int patch_grid() const { return image_size / patch; }
    int num_patches() const { return patch_grid() * patch_grid(); }
    void validate() const;
};

/// Attention maps captured during one fuse() pass.
struct FusionTrace {
    // image encoder self-attention: [layer][head] -> M x M
    std::vector<std::vector<Matrix>> image_self_attention;
    // fusion cross-attention: [head] -> M x L
    std::vector<Matrix> cross_attention;
};

/// The image-text fusion network F: encoders, cross-attention, pooling and
/// the projection to the cross-modal embedding.
class FusionModel {
public:
    FusionModel(FusionConfig cfg, Vocab vocab, std::uint64_t seed);

    const FusionConfig& config() const { return cfg_; }
    const Vocab& vocab() const { return vocab_; }
    nn::ParamStore& params() { return params_; }
    const nn::ParamStore& params() const { return params_; }
    std::uint64_t seed() const { return seed_; }

    /// Graph builders (shared by training and inference).
    nn::Var encode_image_var(nn::Tape& t, const Image& image,
                             std::vector<std::vector<Matrix>>* attn = nullptr) const;
    nn::Var encode_text_var(nn::Tape& t, const std::vector<int>& token_ids) const;
    nn::Var fuse_var(nn::Tape& t, const Image& image, const std::string& text,
                     FusionInputMode mode = FusionInputMode::image_text,
                     FusionTrace* trace = nullptr) const;

    /// Forward-only conveniences.
    std::pair<ImageEmbedding, TextEmbedding> encode_pair(const Image& image,
                                                         const std::string& text) const;
    CrossModalEmbedding fuse(const Image& image, const std::string& text,
                             FusionInputMode mode = FusionInputMode::image_text,
                             FusionTrace* trace = nullptr) const;

    void save(const std::filesystem::path& path) const;
    static FusionModel load(const std::filesystem::path& path);

    /// Fingerprint of the serialized checkpoint bytes.
    std::string model_hash() const;

private:
    void build_params(std::uint64_t seed);

    FusionConfig cfg_;
    Vocab vocab_;
    std::uint64_t seed_ = 0;
    nn::ParamStore params_;

    nn::Param* patch_embed_w_ = nullptr;
    nn::Param* patch_embed_b_ = nullptr;
    nn::Param* token_embed_ = nullptr;
    std::vector<nn::BlockParams> image_blocks_;
    std::vector<nn::BlockParams> text_blocks_;
    nn::LayerNormParams image_final_ln_;
    nn::LayerNormParams text_final_ln_;
    nn::Param* cross_wq_ = nullptr;
    nn::Param* cross_wk_ = nullptr;
    nn::Param* cross_wv_ = nullptr;
    nn::Param* projection_ = nullptr;
    Matrix pos_image_;
    Matrix pos_text_;
};

}  // namespace scarwid
