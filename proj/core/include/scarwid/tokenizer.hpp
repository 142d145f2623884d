#pragma once

#include <string>
#include <unordered_map>
#include <vector>

namespace scarwid {

/// Whitespace + lowercase tokenizer over a fixed vocabulary built from
/// training captions. Ids 0..4 are reserved specials.
class Vocab {
public:
    static constexpr int kPad = 0;
    static constexpr int kBos = 1;
    static constexpr int kEos = 2;
    static constexpr int kUnk = 3;
    static constexpr int kEmpty = 4;  // stands in for empty text input

    Vocab();
    explicit Vocab(const std::vector<std::string>& tokens);  // full token list, specials included

    /// Build from a caption corpus: specials + unique lowercased words in
    /// first-seen order.
    static Vocab build(const std::vector<std::string>& captions);

    static std::vector<std::string> split_words(const std::string& text);

    int size() const { return static_cast<int>(tokens_.size()); }
    const std::vector<std::string>& tokens() const { return tokens_; }
    const std::string& token(int id) const;
    int id(const std::string& word) const;  // kUnk when absent
    bool contains(const std::string& word) const;

    /// Word ids without BOS/EOS. Empty text maps to {kEmpty}.
    std::vector<int> encode(const std::string& text) const;

    /// Ids back to words; specials are skipped.
    std::string decode(const std::vector<int>& ids) const;

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, int> index_;
};

}  // namespace scarwid
