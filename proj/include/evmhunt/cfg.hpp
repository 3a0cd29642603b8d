#pragma once

#include "evmhunt/disasm.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace evmhunt {

enum class TerminatorKind { Fallthrough, Jump, Jumpi, Halt, Invalid };

struct BasicBlock {
    int index = 0;
    uint32_t start_offset = 0;
    InstructionSeq instructions; // non-empty; only the last may terminate/branch
    TerminatorKind terminator = TerminatorKind::Fallthrough;

    bool starts_with_jumpdest() const {
        return !instructions.empty() && instructions.front().op.is_jumpdest();
    }
};

enum class UnresolvedReason { NotJumpdest, UnknownTarget };

struct UnresolvedJump {
    int block = 0;
    UnresolvedReason reason = UnresolvedReason::UnknownTarget;
};

struct Cfg {
    std::vector<BasicBlock> blocks;
    std::vector<std::pair<int, int>> edges; // sorted, unique, self-loops allowed
    std::vector<UnresolvedJump> unresolved;

    size_t node_count() const { return blocks.size(); }
    bool has_edge(int from, int to) const;
    std::vector<std::vector<int>> successors() const;
    std::vector<std::vector<int>> predecessors() const;
};

struct ResolveConfig {
    int pass_cap_per_block = 4; // fixpoint pass cap = 4 * n
    int stack_depth_cap = 64;
};

std::vector<BasicBlock> split_blocks(const InstructionSeq& seq);

// Abstract-stack constant propagation: PUSH constants tracked through
// DUP/SWAP/POP within a block and propagated across fallthrough and
// resolved-jump edges to a bounded fixpoint. Returns resolved jump edges
// only (no fallthrough edges).
void resolve_jump_targets(const std::vector<BasicBlock>& blocks,
                          std::vector<std::pair<int, int>>& edges,
                          std::vector<UnresolvedJump>& unresolved,
                          const ResolveConfig& config = {});

Cfg build_cfg(const ContractBytecode& code, const ResolveConfig& config = {});

std::string cfg_to_json(const Cfg& cfg);
std::string cfg_to_dot(const Cfg& cfg);

const char* to_string(TerminatorKind kind);
const char* to_string(UnresolvedReason reason);

} // namespace evmhunt
