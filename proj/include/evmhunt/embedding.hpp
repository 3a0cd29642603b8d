#pragma once

#include "evmhunt/cfg.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace evmhunt {

// Opcode mnemonic vocabulary; PUSH immediates are abstracted away, so a
// token is a mnemonic string. Index 0 is the reserved UNK token.
struct Vocab {
    std::vector<std::string> tokens;
    std::unordered_map<std::string, int> index;

    static constexpr const char* kUnk = "<UNK>";

    int lookup(std::string_view mnemonic) const;
    size_t size() const { return tokens.size(); }
};

// Tokens sorted by descending corpus frequency, ties lexicographic, UNK
// prepended.
Vocab build_vocab(std::span<const InstructionSeq> corpus);

struct SkipgramConfig {
    int dim = 64;
    int window = 5;
    int negatives = 5;
    int epochs = 5;
    double lr = 0.025; // linear decay over training
    uint64_t seed = 1;
};

struct EmbeddingMatrix {
    Eigen::MatrixXd vectors; // |V| x dim
};

// Skip-gram with negative sampling over flattened mnemonic sequences;
// deterministic under a fixed seed. Degenerate corpora return the
// initialization matrix.
EmbeddingMatrix train_skipgram(std::span<const InstructionSeq> corpus, const Vocab& vocab,
                               const SkipgramConfig& config);

// Row i = mean of the embedding rows of block i's mnemonics.
Eigen::MatrixXd embed_blocks(const Cfg& cfg, const EmbeddingMatrix& emb, const Vocab& vocab);

void save_embedding(const std::string& path, const Vocab& vocab, const EmbeddingMatrix& emb);
void load_embedding(const std::string& path, Vocab& vocab, EmbeddingMatrix& emb);

} // namespace evmhunt
