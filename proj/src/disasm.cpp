#include "evmhunt/disasm.hpp"

#include <algorithm>
#include <cstdio>

namespace evmhunt {

bool Instruction::push_value(uint64_t& out) const {
    if (!op.is_push() && op.byte_value != 0x5f) return false;
    int len = op.immediate_len;
    for (int i = 0; i < len - 8; ++i)
        if (imm[i] != 0) return false;
    uint64_t v = 0;
    for (int i = std::max(0, len - 8); i < len; ++i) v = v << 8 | imm[i];
    out = v;
    return true;
}

std::string Instruction::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04x", offset);
    std::string s(buf);
    s += ": ";
    s += op.mnemonic;
    if (op.immediate_len > 0) {
        s += " 0x";
        s += to_hex(imm.data(), op.immediate_len);
    }
    return s;
}

InstructionSeq disassemble(const ContractBytecode& code) {
    InstructionSeq seq;
    const auto& bytes = code.raw;
    size_t pc = 0;
    while (pc < bytes.size()) {
        Instruction instr;
        instr.offset = static_cast<uint32_t>(pc);
        instr.op = decode_opcode(bytes[pc]);
        size_t imm_len = instr.op.immediate_len;
        size_t avail = std::min(imm_len, bytes.size() - pc - 1);
        std::copy_n(bytes.begin() + static_cast<long>(pc) + 1, avail, instr.imm.begin());
        instr.truncated = avail < imm_len;
        seq.push_back(instr);
        pc += 1 + imm_len;
    }
    return seq;
}

std::vector<uint8_t> reassemble(const InstructionSeq& seq) {
    std::vector<uint8_t> out;
    for (const auto& instr : seq) {
        out.push_back(instr.op.byte_value);
        out.insert(out.end(), instr.imm.begin(), instr.imm.begin() + instr.op.immediate_len);
    }
    return out;
}

ContractBytecode strip_trailing_metadata(const ContractBytecode& code) {
    const auto& raw = code.raw;
    if (raw.size() < 4) return code;
    size_t len = static_cast<size_t>(raw[raw.size() - 2]) << 8 | raw[raw.size() - 1];
    if (len == 0 || len + 2 > raw.size()) return code;
    uint8_t head = raw[raw.size() - 2 - len];
    if ((head & 0xe0) != 0xa0) return code; // CBOR major type 5 (map)
    ContractBytecode out;
    out.id = code.id;
    out.raw.assign(raw.begin(), raw.end() - static_cast<long>(len + 2));
    return out;
}

} // namespace evmhunt
