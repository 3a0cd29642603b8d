#include "evmhunt/cfg.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace evmhunt {

bool Cfg::has_edge(int from, int to) const {
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(from, to));
}

std::vector<std::vector<int>> Cfg::successors() const {
    std::vector<std::vector<int>> out(blocks.size());
    for (const auto& [i, j] : edges) out[static_cast<size_t>(i)].push_back(j);
    return out;
}

std::vector<std::vector<int>> Cfg::predecessors() const {
    std::vector<std::vector<int>> in(blocks.size());
    for (const auto& [i, j] : edges) in[static_cast<size_t>(j)].push_back(i);
    return in;
}

std::vector<BasicBlock> split_blocks(const InstructionSeq& seq) {
    std::vector<BasicBlock> blocks;
    BasicBlock current;
    auto flush = [&](TerminatorKind kind) {
        if (current.instructions.empty()) return;
        current.index = static_cast<int>(blocks.size());
        current.start_offset = current.instructions.front().offset;
        current.terminator = kind;
        blocks.push_back(std::move(current));
        current = BasicBlock{};
    };
    for (const auto& instr : seq) {
        if (instr.op.is_jumpdest()) flush(TerminatorKind::Fallthrough);
        current.instructions.push_back(instr);
        if (instr.op.is_branch) {
            flush(TerminatorKind::Jumpi);
        } else if (instr.op.is_terminator) {
            if (instr.op.byte_value == 0x56)
                flush(TerminatorKind::Jump);
            else if (instr.op.mnemonic == "INVALID")
                flush(TerminatorKind::Invalid);
            else
                flush(TerminatorKind::Halt);
        }
    }
    flush(TerminatorKind::Fallthrough);
    return blocks;
}

namespace {

// Abstract stack cell: a known 64-bit constant or top (unknown).
struct AbsVal {
    bool known = false;
    uint64_t value = 0;

    bool operator==(const AbsVal&) const = default;
};

// Top of stack at the back. Cells below the tracked region read as top,
// which also models unknown entry stacks for unreached blocks.
struct AbsStack {
    std::vector<AbsVal> cells;

    bool operator==(const AbsStack&) const = default;

    void push(AbsVal v, int depth_cap) {
        if (static_cast<int>(cells.size()) >= depth_cap) cells.erase(cells.begin());
        cells.push_back(v);
    }
    AbsVal pop() {
        if (cells.empty()) return {};
        AbsVal v = cells.back();
        cells.pop_back();
        return v;
    }
    AbsVal peek(size_t depth) const { // depth 0 = top
        if (depth >= cells.size()) return {};
        return cells[cells.size() - 1 - depth];
    }
    void set(size_t depth, AbsVal v) {
        if (depth < cells.size()) cells[cells.size() - 1 - depth] = v;
    }
};

// Element-wise join aligned from the top; mismatched depths truncate.
AbsStack join(const AbsStack& a, const AbsStack& b) {
    size_t n = std::min(a.cells.size(), b.cells.size());
    AbsStack out;
    out.cells.resize(n);
    for (size_t d = 0; d < n; ++d) {
        AbsVal va = a.cells[a.cells.size() - n + d];
        AbsVal vb = b.cells[b.cells.size() - n + d];
        out.cells[d] = (va.known && va == vb) ? va : AbsVal{};
    }
    return out;
}

struct BlockExit {
    AbsStack stack;                    // after popping terminator operands
    std::optional<AbsVal> jump_target; // set for jump/jumpi blocks
};

BlockExit simulate_block(const BasicBlock& block, AbsStack stack, int depth_cap) {
    BlockExit exit;
    for (const auto& instr : block.instructions) {
        const auto& op = instr.op;
        uint8_t b = op.byte_value;
        if (b == 0x5f || op.is_push()) {
            uint64_t v = 0;
            if (instr.push_value(v))
                stack.push({true, v}, depth_cap);
            else
                stack.push({}, depth_cap);
        } else if (b >= 0x80 && b <= 0x8f) { // DUPn
            stack.push(stack.peek(static_cast<size_t>(b - 0x80)), depth_cap);
        } else if (b >= 0x90 && b <= 0x9f) { // SWAPn
            size_t d = static_cast<size_t>(b - 0x90 + 1);
            AbsVal top = stack.peek(0);
            AbsVal other = stack.peek(d);
            // Extend the tracked region so the swapped-in top is explicit.
            while (stack.cells.size() <= d) stack.cells.insert(stack.cells.begin(), AbsVal{});
            stack.set(0, other);
            stack.set(d, top);
        } else if (b == 0x56 || b == 0x57) { // JUMP/JUMPI
            exit.jump_target = stack.pop();
            if (b == 0x57) stack.pop(); // condition
        } else {
            for (int k = 0; k < op.stack_in; ++k) stack.pop();
            for (int k = 0; k < op.stack_out; ++k) stack.push({}, depth_cap);
        }
    }
    exit.stack = std::move(stack);
    return exit;
}

} // namespace

void resolve_jump_targets(const std::vector<BasicBlock>& blocks,
                          std::vector<std::pair<int, int>>& edges,
                          std::vector<UnresolvedJump>& unresolved,
                          const ResolveConfig& config) {
    edges.clear();
    unresolved.clear();
    const int n = static_cast<int>(blocks.size());
    if (n == 0) return;

    // Offset of a JUMPDEST-starting block -> block index.
    std::map<uint64_t, int> jumpdest_blocks;
    for (const auto& block : blocks)
        if (block.starts_with_jumpdest()) jumpdest_blocks[block.start_offset] = block.index;

    std::vector<std::optional<AbsStack>> entry(static_cast<size_t>(n));
    entry[0] = AbsStack{};

    std::set<std::pair<int, int>> jump_edges;
    // Latest resolution status per jump/jumpi block.
    std::map<int, std::optional<UnresolvedReason>> jump_status;

    const int pass_cap = config.pass_cap_per_block * n;
    for (int pass = 0; pass < pass_cap; ++pass) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            const BasicBlock& block = blocks[static_cast<size_t>(i)];
            AbsStack in = entry[static_cast<size_t>(i)].value_or(AbsStack{});
            BlockExit exit = simulate_block(block, std::move(in), config.stack_depth_cap);

            auto propagate = [&](int succ) {
                auto& slot = entry[static_cast<size_t>(succ)];
                AbsStack merged = slot ? join(*slot, exit.stack) : exit.stack;
                if (!slot || !(*slot == merged)) {
                    slot = std::move(merged);
                    changed = true;
                }
            };

            bool is_jump = block.terminator == TerminatorKind::Jump;
            bool is_jumpi = block.terminator == TerminatorKind::Jumpi;
            if (is_jump || is_jumpi) {
                const AbsVal target = exit.jump_target.value_or(AbsVal{});
                if (!target.known) {
                    jump_status[i] = UnresolvedReason::UnknownTarget;
                } else if (auto it = jumpdest_blocks.find(target.value);
                           it != jumpdest_blocks.end()) {
                    jump_status[i] = std::nullopt;
                    if (jump_edges.emplace(i, it->second).second) changed = true;
                    propagate(it->second);
                } else {
                    jump_status[i] = UnresolvedReason::NotJumpdest;
                }
            }
            bool falls_through =
                block.terminator == TerminatorKind::Fallthrough || is_jumpi;
            if (falls_through && i + 1 < n) propagate(i + 1);
        }
        if (!changed) break;
    }

    edges.assign(jump_edges.begin(), jump_edges.end());
    // A block counts as unresolved only if no pass ever produced an edge
    // for it; late joins may degrade a constant after the edge was found.
    std::set<int> resolved_sources;
    for (const auto& [a, b] : jump_edges) resolved_sources.insert(a);
    for (const auto& [block, reason] : jump_status)
        if (reason && !resolved_sources.count(block)) unresolved.push_back({block, *reason});
}

Cfg build_cfg(const ContractBytecode& code, const ResolveConfig& config) {
    Cfg cfg;
    cfg.blocks = split_blocks(disassemble(code));
    resolve_jump_targets(cfg.blocks, cfg.edges, cfg.unresolved, config);

    std::set<std::pair<int, int>> all(cfg.edges.begin(), cfg.edges.end());
    for (const auto& block : cfg.blocks) {
        bool falls_through = block.terminator == TerminatorKind::Fallthrough ||
                             block.terminator == TerminatorKind::Jumpi;
        if (falls_through && block.index + 1 < static_cast<int>(cfg.blocks.size()))
            all.emplace(block.index, block.index + 1);
    }
    cfg.edges.assign(all.begin(), all.end());
    return cfg;
}

const char* to_string(TerminatorKind kind) {
    switch (kind) {
    case TerminatorKind::Fallthrough: return "fallthrough";
    case TerminatorKind::Jump: return "jump";
    case TerminatorKind::Jumpi: return "jumpi";
    case TerminatorKind::Halt: return "halt";
    case TerminatorKind::Invalid: return "invalid";
    }
    return "?";
}

const char* to_string(UnresolvedReason reason) {
    return reason == UnresolvedReason::NotJumpdest ? "not-jumpdest" : "unknown-target";
}

std::string cfg_to_json(const Cfg& cfg) {
    nlohmann::json j;
    j["blocks"] = nlohmann::json::array();
    for (const auto& block : cfg.blocks) {
        nlohmann::json jb;
        jb["index"] = block.index;
        jb["start_offset"] = block.start_offset;
        jb["terminator"] = to_string(block.terminator);
        jb["instructions"] = nlohmann::json::array();
        for (const auto& instr : block.instructions) {
            nlohmann::json ji;
            ji["offset"] = instr.offset;
            ji["mnemonic"] = std::string(instr.op.mnemonic);
            if (instr.op.immediate_len > 0)
                ji["immediate"] = to_hex(instr.imm.data(), instr.op.immediate_len);
            if (instr.truncated) ji["truncated"] = true;
            jb["instructions"].push_back(std::move(ji));
        }
        j["blocks"].push_back(std::move(jb));
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : cfg.edges) j["edges"].push_back({a, b});
    j["unresolved"] = nlohmann::json::array();
    for (const auto& u : cfg.unresolved)
        j["unresolved"].push_back({{"block", u.block}, {"reason", to_string(u.reason)}});
    return j.dump(2);
}

std::string cfg_to_dot(const Cfg& cfg) {
    std::ostringstream out;
    out << "digraph cfg {\n  node [shape=box, fontname=\"monospace\"];\n";
    for (const auto& block : cfg.blocks) {
        out << "  b" << block.index << " [label=\"";
        for (const auto& instr : block.instructions) out << instr.to_string() << "\\l";
        out << "\"];\n";
    }
    for (const auto& [a, b] : cfg.edges) out << "  b" << a << " -> b" << b << ";\n";
    out << "}\n";
    return out.str();
}

} // namespace evmhunt
