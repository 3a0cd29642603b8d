#include "evmhunt/avp.hpp"

#include "evmhunt/error.hpp"
#include "evmhunt/kvconfig.hpp"

#include <algorithm>

namespace evmhunt {

const char* to_string(VulnClass cls) {
    switch (cls) {
    case VulnClass::Reentrancy: return "reentrancy";
    case VulnClass::Timestamp: return "timestamp";
    case VulnClass::TxOrigin: return "tx_origin";
    case VulnClass::Delegatecall: return "delegatecall";
    }
    return "?";
}

VulnClass vuln_class_from_string(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), ::tolower);
    for (VulnClass cls : kAllVulnClasses)
        if (s == to_string(cls)) return cls;
    if (s == "txorigin" || s == "tx.origin") return VulnClass::TxOrigin;
    throw DataError("unknown vulnerability class: " + name);
}

void PatternTable::validate() const {
    if (sl.empty() || so.empty() || ss.empty())
        throw DataError(std::string("pattern table for ") + to_string(vuln_class) +
                        ": sl/so/ss must be non-empty");
    for (const auto& m : sl)
        if (so.count(m) || ss.count(m))
            throw DataError("pattern table: mnemonic in multiple sets: " + m);
    for (const auto& m : so)
        if (ss.count(m)) throw DataError("pattern table: mnemonic in multiple sets: " + m);
}

void ScoreConfig::validate() const {
    if (!(nu >= 0.0 && nu < 0.5))
        throw DataError("score config: nu must be in [0, 0.5)");
    if (!(xi > 0.5 && xi <= 1.0))
        throw DataError("score config: xi must be in (0.5, 1]");
    if (l < 1 || l > 5) throw DataError("score config: l must be in 1..5");
    if (feature_dim < 1) throw DataError("score config: feature_dim must be positive");
}

namespace {

const std::set<std::string, std::less<>> kDefaultSo = {"ADD", "SUB", "MUL",    "DIV",
                                                       "LT",  "GT",  "EQ",     "ISZERO",
                                                       "AND", "OR",  "XOR",    "NOT"};
const std::set<std::string, std::less<>> kDefaultSs = {"SSTORE", "MSTORE", "MSTORE8"};

std::array<PatternTable, 4> build_default_tables() {
    std::array<PatternTable, 4> tables;
    tables[0] = {VulnClass::Reentrancy, {"CALLVALUE", "CALL"}, kDefaultSo, kDefaultSs};
    tables[1] = {VulnClass::Timestamp, {"TIMESTAMP"}, kDefaultSo, kDefaultSs};
    tables[2] = {VulnClass::TxOrigin, {"ORIGIN"}, kDefaultSo, kDefaultSs};
    tables[3] = {VulnClass::Delegatecall, {"DELEGATECALL"}, kDefaultSo, kDefaultSs};
    for (const auto& t : tables) t.validate();
    return tables;
}

} // namespace

const std::array<PatternTable, 4>& default_pattern_tables() {
    static const std::array<PatternTable, 4> tables = build_default_tables();
    return tables;
}

const PatternTable& default_table(VulnClass cls) {
    for (const auto& t : default_pattern_tables())
        if (t.vuln_class == cls) return t;
    throw std::logic_error("missing default table");
}

std::array<PatternTable, 4> load_pattern_tables(const std::string& path) {
    KvConfig cfg = KvConfig::parse_file(path);
    std::array<PatternTable, 4> tables = default_pattern_tables();
    for (auto& table : tables) {
        std::string prefix = to_string(table.vuln_class);
        auto load_set = [&](const char* key, std::set<std::string, std::less<>>& dst) {
            std::string full = prefix + "." + key;
            if (!cfg.has(full)) return;
            dst.clear();
            for (const auto& m : cfg.get_list(full)) dst.insert(m);
        };
        load_set("sl", table.sl);
        load_set("so", table.so);
        load_set("ss", table.ss);
        table.validate();
    }
    return tables;
}

PatternTags classify_instruction(const Instruction& instr, const PatternTable& table) {
    PatternTags tags;
    tags.sl = table.sl.count(instr.op.mnemonic) > 0;
    tags.so = table.so.count(instr.op.mnemonic) > 0;
    tags.ss = table.ss.count(instr.op.mnemonic) > 0;
    return tags;
}

namespace {

void descend(const std::vector<std::vector<int>>& succ, std::vector<int>& path,
             std::vector<char>& on_path, int depth_left, std::vector<NodeChain>& out) {
    bool extended = false;
    if (depth_left > 0) {
        for (int next : succ[static_cast<size_t>(path.back())]) {
            if (on_path[static_cast<size_t>(next)]) continue;
            extended = true;
            path.push_back(next);
            on_path[static_cast<size_t>(next)] = 1;
            descend(succ, path, on_path, depth_left - 1, out);
            on_path[static_cast<size_t>(next)] = 0;
            path.pop_back();
        }
    }
    if (!extended) out.push_back(NodeChain{path});
}

} // namespace

std::vector<NodeChain> enumerate_chains(const Cfg& cfg, int root, int l) {
    if (root < 0 || root >= static_cast<int>(cfg.node_count()))
        throw std::out_of_range("enumerate_chains: bad root index");
    if (l < 1 || l > 5) throw std::invalid_argument("enumerate_chains: l must be in 1..5");
    auto succ = cfg.successors();
    for (auto& s : succ) std::sort(s.begin(), s.end());
    std::vector<NodeChain> out;
    std::vector<int> path = {root};
    std::vector<char> on_path(cfg.node_count(), 0);
    on_path[static_cast<size_t>(root)] = 1;
    descend(succ, path, on_path, l, out);
    return out;
}

bool match_chain(const NodeChain& chain, const Cfg& cfg, const PatternTable& table) {
    // Greedy subsequence match over the chain's instructions flattened in
    // (chain position, byte order): earliest SL, then SO after it, then SS.
    int state = 0; // 0: want SL, 1: want SO, 2: want SS
    for (int node : chain.nodes) {
        const auto& block = cfg.blocks.at(static_cast<size_t>(node));
        for (const auto& instr : block.instructions) {
            PatternTags tags = classify_instruction(instr, table);
            if (state == 0 && tags.sl)
                state = 1;
            else if (state == 1 && tags.so)
                state = 2;
            else if (state == 2 && tags.ss)
                return true;
        }
    }
    return false;
}

std::vector<NodeChain> collect_matched_chains(const Cfg& cfg, const PatternTable& table, int l) {
    std::vector<NodeChain> matched;
    for (int root = 0; root < static_cast<int>(cfg.node_count()); ++root)
        for (auto& chain : enumerate_chains(cfg, root, l))
            if (match_chain(chain, cfg, table)) matched.push_back(std::move(chain));
    return matched;
}

std::vector<bool> matched_nodes(const Cfg& cfg, const PatternTable& table, int l) {
    std::vector<bool> hit(cfg.node_count(), false);
    for (const auto& chain : collect_matched_chains(cfg, table, l))
        for (int node : chain.nodes) hit[static_cast<size_t>(node)] = true;
    return hit;
}

NodeScores score_nodes(const Cfg& cfg, const PatternTable& table, const ScoreConfig& config) {
    config.validate();
    const auto n = static_cast<Eigen::Index>(cfg.node_count());
    NodeScores scores;
    scores.scores.resize(n);
    scores.features.resize(n, config.feature_dim);
    if (n == 0) return scores;
    std::vector<bool> hit = matched_nodes(cfg, table, config.l);
    for (Eigen::Index i = 0; i < n; ++i)
        scores.scores[i] = hit[static_cast<size_t>(i)] ? config.xi : config.nu;
    scores.features = scores.scores * Eigen::RowVectorXd::Ones(config.feature_dim);
    return scores;
}

std::set<VulnClass> triage_contract(const Cfg& cfg, const std::array<PatternTable, 4>& tables) {
    std::set<VulnClass> out;
    for (const auto& table : tables) {
        bool any = false;
        for (int root = 0; root < static_cast<int>(cfg.node_count()) && !any; ++root)
            for (const auto& chain : enumerate_chains(cfg, root, 5))
                if (match_chain(chain, cfg, table)) {
                    any = true;
                    break;
                }
        if (any) out.insert(table.vuln_class);
    }
    return out;
}

} // namespace evmhunt
