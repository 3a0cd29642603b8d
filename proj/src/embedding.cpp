#include "evmhunt/embedding.hpp"

#include "evmhunt/error.hpp"
#include "evmhunt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

namespace evmhunt {

int Vocab::lookup(std::string_view mnemonic) const {
    auto it = index.find(std::string(mnemonic));
    return it == index.end() ? 0 : it->second;
}

Vocab build_vocab(std::span<const InstructionSeq> corpus) {
    std::map<std::string, long> freq;
    for (const auto& seq : corpus)
        for (const auto& instr : seq) ++freq[std::string(instr.op.mnemonic)];

    std::vector<std::pair<std::string, long>> sorted(freq.begin(), freq.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocab vocab;
    vocab.tokens.push_back(Vocab::kUnk);
    for (const auto& [token, count] : sorted) vocab.tokens.push_back(token);
    for (size_t i = 0; i < vocab.tokens.size(); ++i)
        vocab.index[vocab.tokens[i]] = static_cast<int>(i);
    return vocab;
}

EmbeddingMatrix train_skipgram(std::span<const InstructionSeq> corpus, const Vocab& vocab,
                               const SkipgramConfig& config) {
    if (config.dim < 1) throw DataError("skipgram: dim must be >= 1");
    const auto v = static_cast<Eigen::Index>(vocab.size());
    const auto d = static_cast<Eigen::Index>(config.dim);

    Rng rng(config.seed);
    EmbeddingMatrix emb;
    emb.vectors.resize(v, d);
    for (Eigen::Index i = 0; i < v; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            emb.vectors(i, j) = rng.uniform(-0.5, 0.5) / config.dim;
    Eigen::MatrixXd ctx = Eigen::MatrixXd::Zero(v, d);

    // Token id sequences plus unigram counts for the noise distribution.
    std::vector<std::vector<int>> seqs;
    std::vector<double> counts(vocab.size(), 0.0);
    long total_tokens = 0;
    for (const auto& seq : corpus) {
        std::vector<int> ids;
        ids.reserve(seq.size());
        for (const auto& instr : seq) {
            int id = vocab.lookup(instr.op.mnemonic);
            ids.push_back(id);
            counts[static_cast<size_t>(id)] += 1.0;
            ++total_tokens;
        }
        if (ids.size() >= 2) seqs.push_back(std::move(ids));
    }
    if (seqs.empty() || config.epochs <= 0) return emb;

    // Unigram^0.75 cumulative table for negative sampling.
    std::vector<double> cumulative(counts.size(), 0.0);
    double acc = 0.0;
    for (size_t i = 0; i < counts.size(); ++i) {
        acc += std::pow(counts[i], 0.75);
        cumulative[i] = acc;
    }
    if (acc <= 0.0) return emb;
    auto sample_noise = [&] {
        double u = rng.uniform() * acc;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        return static_cast<int>(std::min<size_t>(
            static_cast<size_t>(it - cumulative.begin()), counts.size() - 1));
    };

    auto sigmoid = [](double x) { return 1.0 / (1.0 + std::exp(-x)); };

    const double total_steps =
        static_cast<double>(total_tokens) * std::max(1, config.epochs);
    long steps = 0;
    Eigen::VectorXd grad_in(d);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        for (const auto& ids : seqs) {
            const int len = static_cast<int>(ids.size());
            for (int t = 0; t < len; ++t) {
                double lr = config.lr * std::max(1e-4, 1.0 - static_cast<double>(steps) /
                                                                total_steps);
                ++steps;
                int center = ids[static_cast<size_t>(t)];
                int lo = std::max(0, t - config.window);
                int hi = std::min(len - 1, t + config.window);
                for (int c = lo; c <= hi; ++c) {
                    if (c == t) continue;
                    int context = ids[static_cast<size_t>(c)];
                    grad_in.setZero();
                    auto update = [&](int target, double label) {
                        double z = emb.vectors.row(center).dot(ctx.row(target));
                        double g = (label - sigmoid(z)) * lr;
                        grad_in += g * ctx.row(target).transpose();
                        ctx.row(target) += g * emb.vectors.row(center);
                    };
                    update(context, 1.0);
                    for (int k = 0; k < config.negatives; ++k) {
                        int noise = sample_noise();
                        if (noise == context) continue;
                        update(noise, 0.0);
                    }
                    emb.vectors.row(center) += grad_in.transpose();
                }
            }
        }
    }
    return emb;
}

Eigen::MatrixXd embed_blocks(const Cfg& cfg, const EmbeddingMatrix& emb, const Vocab& vocab) {
    const auto n = static_cast<Eigen::Index>(cfg.node_count());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, emb.vectors.cols());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& block = cfg.blocks[static_cast<size_t>(i)];
        for (const auto& instr : block.instructions)
            out.row(i) += emb.vectors.row(vocab.lookup(instr.op.mnemonic));
        out.row(i) /= static_cast<double>(block.instructions.size());
    }
    return out;
}

namespace {

constexpr char kMagic[8] = {'E', 'V', 'M', 'H', 'E', 'M', 'B', '\0'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& out, uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

uint32_t read_u32(std::istream& in) {
    uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace

void save_embedding(const std::string& path, const Vocab& vocab, const EmbeddingMatrix& emb) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write embedding file: " + path);
    out.write(kMagic, sizeof kMagic);
    write_u32(out, kVersion);
    write_u32(out, static_cast<uint32_t>(vocab.size()));
    write_u32(out, static_cast<uint32_t>(emb.vectors.cols()));
    for (const auto& token : vocab.tokens) {
        write_u32(out, static_cast<uint32_t>(token.size()));
        out.write(token.data(), static_cast<long>(token.size()));
    }
    for (Eigen::Index i = 0; i < emb.vectors.rows(); ++i)
        for (Eigen::Index j = 0; j < emb.vectors.cols(); ++j) {
            double v = emb.vectors(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof v);
        }
    if (!out) throw DataError("short write to embedding file: " + path);
}

void load_embedding(const std::string& path, Vocab& vocab, EmbeddingMatrix& emb) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open embedding file: " + path);
    char magic[8] = {};
    in.read(magic, sizeof magic);
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw DataError("bad embedding file magic: " + path);
    uint32_t version = read_u32(in);
    if (version != kVersion)
        throw DataError("unsupported embedding file version " + std::to_string(version));
    uint32_t vsize = read_u32(in);
    uint32_t dim = read_u32(in);
    vocab.tokens.clear();
    vocab.index.clear();
    for (uint32_t i = 0; i < vsize; ++i) {
        uint32_t len = read_u32(in);
        if (len > 1024) throw DataError("corrupt embedding file (token length): " + path);
        std::string token(len, '\0');
        in.read(token.data(), len);
        vocab.index[token] = static_cast<int>(i);
        vocab.tokens.push_back(std::move(token));
    }
    emb.vectors.resize(vsize, dim);
    for (uint32_t i = 0; i < vsize; ++i)
        for (uint32_t j = 0; j < dim; ++j) {
            double v = 0;
            in.read(reinterpret_cast<char*>(&v), sizeof v);
            emb.vectors(i, j) = v;
        }
    if (!in) throw DataError("truncated embedding file: " + path);
}

} // namespace evmhunt
