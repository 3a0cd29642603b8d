#pragma once

#include "evmhunt/hex.hpp"
#include "evmhunt/opcodes.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace evmhunt {

// One decoded instruction. A PUSH whose immediate runs past end-of-code is
// zero-padded and flagged truncated instead of rejected; real on-chain code
// frequently ends mid-PUSH inside metadata.
struct Instruction {
    uint32_t offset = 0;
    OpcodeInfo op;
    std::array<uint8_t, 32> imm = {};
    bool truncated = false;

    std::span<const uint8_t> immediate() const { return {imm.data(), op.immediate_len}; }

    // Constant pushed by PUSH0..PUSH32 as a 64-bit value; false if the
    // immediate has significant bytes above the low 8.
    bool push_value(uint64_t& out) const;

    std::string to_string() const; // "<offset-hex>: <MNEMONIC> [<imm-hex>]"
};

using InstructionSeq = std::vector<Instruction>;

InstructionSeq disassemble(const ContractBytecode& code);

// Inverse of disassemble when no instruction is truncated.
std::vector<uint8_t> reassemble(const InstructionSeq& seq);

// Removes the Solidity CBOR metadata suffix when the trailing two bytes
// encode a length L and the L bytes before them start with a CBOR map
// header; otherwise returns the input unchanged.
ContractBytecode strip_trailing_metadata(const ContractBytecode& code);

} // namespace evmhunt
