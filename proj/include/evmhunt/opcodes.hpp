#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace evmhunt {

// Static description of one EVM opcode byte. Undefined bytes decode to
// INVALID (they halt execution, so they terminate basic blocks).
struct OpcodeInfo {
    uint8_t byte_value = 0;
    std::string_view mnemonic = "INVALID";
    uint8_t immediate_len = 0; // nonzero only for PUSH1..PUSH32
    bool is_terminator = false; // STOP/RETURN/REVERT/SELFDESTRUCT/INVALID/JUMP
    bool is_branch = false;     // JUMPI
    uint8_t stack_in = 0;
    uint8_t stack_out = 0;

    bool is_push() const { return byte_value >= 0x60 && byte_value <= 0x7f; }
    bool is_jumpdest() const { return byte_value == 0x5b; }
};

const std::array<OpcodeInfo, 256>& opcode_table();

// Total over all byte values; undefined bytes yield INVALID.
const OpcodeInfo& decode_opcode(uint8_t byte_value);

} // namespace evmhunt
