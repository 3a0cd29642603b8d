#pragma once

#include "evmhunt/cfg.hpp"

#include <Eigen/Dense>

#include <array>
#include <set>
#include <string>
#include <vector>

namespace evmhunt {

enum class VulnClass { Reentrancy, Timestamp, TxOrigin, Delegatecall };

constexpr std::array<VulnClass, 4> kAllVulnClasses = {
    VulnClass::Reentrancy, VulnClass::Timestamp, VulnClass::TxOrigin, VulnClass::Delegatecall};

const char* to_string(VulnClass cls);
VulnClass vuln_class_from_string(const std::string& name);

// State-Loading / State-Operation / State-Storage instruction sets for one
// vulnerability class. Sets must be non-empty and disjoint within a table.
struct PatternTable {
    VulnClass vuln_class = VulnClass::Reentrancy;
    std::set<std::string, std::less<>> sl;
    std::set<std::string, std::less<>> so;
    std::set<std::string, std::less<>> ss;

    void validate() const;
};

struct PatternTags {
    bool sl = false, so = false, ss = false;
    bool any() const { return sl || so || ss; }
};

// Chain of node indices starting at a root and following edges; no node
// repeats within a chain.
struct NodeChain {
    std::vector<int> nodes;
};

struct ScoreConfig {
    double xi = 1.0; // matched score, (0.5, 1]
    double nu = 0.0; // noise score, [0, 0.5)
    int l = 2;       // downstream depth, 1..5
    int feature_dim = 64;

    void validate() const;
};

struct NodeScores {
    Eigen::VectorXd scores;   // n, each xi or nu
    Eigen::MatrixXd features; // n x D, row i = scores[i] * ones
};

const std::array<PatternTable, 4>& default_pattern_tables();
const PatternTable& default_table(VulnClass cls);

// Pattern tables from INI-style text: one [class] section with keys
// sl/so/ss mapping to comma-separated mnemonic lists.
std::array<PatternTable, 4> load_pattern_tables(const std::string& path);

PatternTags classify_instruction(const Instruction& instr, const PatternTable& table);

// All maximal DFS descents from root, each at most l+1 nodes, cycles cut
// by never revisiting a node within a chain.
std::vector<NodeChain> enumerate_chains(const Cfg& cfg, int root, int l);

// True iff some chain positions p <= q <= r carry SL, SO, SS in that
// order; instructions sharing a node must respect byte order.
bool match_chain(const NodeChain& chain, const Cfg& cfg, const PatternTable& table);

NodeScores score_nodes(const Cfg& cfg, const PatternTable& table, const ScoreConfig& config);

// Per-node flag: belongs to at least one matched chain at depth l.
std::vector<bool> matched_nodes(const Cfg& cfg, const PatternTable& table, int l);

std::vector<NodeChain> collect_matched_chains(const Cfg& cfg, const PatternTable& table, int l);

std::set<VulnClass> triage_contract(const Cfg& cfg, const std::array<PatternTable, 4>& tables);

} // namespace evmhunt
