#include "scarwid/tokenizer.hpp"

#include <algorithm>
#include <cctype>

#include "scarwid/common.hpp"

namespace scarwid {

namespace {
const char* kSpecials[] = {"<pad>", "<bos>", "<eos>", "<unk>", "<empty>"};
}

Vocab::Vocab() : Vocab(std::vector<std::string>{}) {}

Vocab::Vocab(const std::vector<std::string>& tokens) {
    if (tokens.empty()) {
        for (const char* s : kSpecials) tokens_.emplace_back(s);
    } else {
        tokens_ = tokens;
        if (tokens_.size() < 5 || tokens_[kPad] != kSpecials[0])
            throw Error("vocabulary must start with the reserved special tokens");
    }
    for (int i = 0; i < static_cast<int>(tokens_.size()); ++i) index_[tokens_[i]] = i;
}

std::vector<std::string> Vocab::split_words(const std::string& text) {
    std::vector<std::string> words;
    std::string cur;
    for (char ch : text) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) {
                words.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        }
    }
    if (!cur.empty()) words.push_back(cur);
    return words;
}

Vocab Vocab::build(const std::vector<std::string>& captions) {
    std::vector<std::string> tokens;
    for (const char* s : kSpecials) tokens.emplace_back(s);
    std::unordered_map<std::string, int> seen;
    for (const char* s : kSpecials) seen[s] = 1;
    for (const std::string& cap : captions)
        for (const std::string& w : split_words(cap))
            if (seen.emplace(w, 1).second) tokens.push_back(w);
    return Vocab(tokens);
}

const std::string& Vocab::token(int id) const {
    if (id < 0 || id >= size()) throw Error("token id out of range: " + std::to_string(id));
    return tokens_[id];
}

int Vocab::id(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? kUnk : it->second;
}

bool Vocab::contains(const std::string& word) const { return index_.count(word) > 0; }

std::vector<int> Vocab::encode(const std::string& text) const {
    auto words = split_words(text);
    if (words.empty()) return {kEmpty};
    std::vector<int> ids;
    ids.reserve(words.size());
    for (const auto& w : words) ids.push_back(id(w));
    return ids;
}

std::string Vocab::decode(const std::vector<int>& ids) const {
    std::string out;
    for (int id : ids) {
        if (id >= kPad && id <= kEmpty) continue;
        if (!out.empty()) out += ' ';
        out += token(id);
    }
    return out;
}

}  // namespace scarwid
