#include "evmhunt/opcodes.hpp"

namespace evmhunt {

namespace {

constexpr const char* kPushNames[33] = {
    "PUSH0",  "PUSH1",  "PUSH2",  "PUSH3",  "PUSH4",  "PUSH5",  "PUSH6",  "PUSH7",  "PUSH8",
    "PUSH9",  "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14", "PUSH15", "PUSH16", "PUSH17",
    "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22", "PUSH23", "PUSH24", "PUSH25", "PUSH26",
    "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31", "PUSH32"};

constexpr const char* kDupNames[16] = {"DUP1",  "DUP2",  "DUP3",  "DUP4", "DUP5",  "DUP6",
                                       "DUP7",  "DUP8",  "DUP9",  "DUP10", "DUP11", "DUP12",
                                       "DUP13", "DUP14", "DUP15", "DUP16"};

constexpr const char* kSwapNames[16] = {"SWAP1",  "SWAP2",  "SWAP3",  "SWAP4",  "SWAP5",
                                        "SWAP6",  "SWAP7",  "SWAP8",  "SWAP9",  "SWAP10",
                                        "SWAP11", "SWAP12", "SWAP13", "SWAP14", "SWAP15",
                                        "SWAP16"};

constexpr const char* kLogNames[5] = {"LOG0", "LOG1", "LOG2", "LOG3", "LOG4"};

std::array<OpcodeInfo, 256> build_table() {
    std::array<OpcodeInfo, 256> t{};
    for (int b = 0; b < 256; ++b) {
        t[b].byte_value = static_cast<uint8_t>(b);
        t[b].mnemonic = "INVALID";
        t[b].is_terminator = true;
    }

    auto def = [&](uint8_t b, std::string_view name, uint8_t in, uint8_t out) {
        t[b] = OpcodeInfo{b, name, 0, false, false, in, out};
    };

    def(0x00, "STOP", 0, 0);
    def(0x01, "ADD", 2, 1);
    def(0x02, "MUL", 2, 1);
    def(0x03, "SUB", 2, 1);
    def(0x04, "DIV", 2, 1);
    def(0x05, "SDIV", 2, 1);
    def(0x06, "MOD", 2, 1);
    def(0x07, "SMOD", 2, 1);
    def(0x08, "ADDMOD", 3, 1);
    def(0x09, "MULMOD", 3, 1);
    def(0x0a, "EXP", 2, 1);
    def(0x0b, "SIGNEXTEND", 2, 1);

    def(0x10, "LT", 2, 1);
    def(0x11, "GT", 2, 1);
    def(0x12, "SLT", 2, 1);
    def(0x13, "SGT", 2, 1);
    def(0x14, "EQ", 2, 1);
    def(0x15, "ISZERO", 1, 1);
    def(0x16, "AND", 2, 1);
    def(0x17, "OR", 2, 1);
    def(0x18, "XOR", 2, 1);
    def(0x19, "NOT", 1, 1);
    def(0x1a, "BYTE", 2, 1);
    def(0x1b, "SHL", 2, 1);
    def(0x1c, "SHR", 2, 1);
    def(0x1d, "SAR", 2, 1);

    def(0x20, "SHA3", 2, 1);

    def(0x30, "ADDRESS", 0, 1);
    def(0x31, "BALANCE", 1, 1);
    def(0x32, "ORIGIN", 0, 1);
    def(0x33, "CALLER", 0, 1);
    def(0x34, "CALLVALUE", 0, 1);
    def(0x35, "CALLDATALOAD", 1, 1);
    def(0x36, "CALLDATASIZE", 0, 1);
    def(0x37, "CALLDATACOPY", 3, 0);
    def(0x38, "CODESIZE", 0, 1);
    def(0x39, "CODECOPY", 3, 0);
    def(0x3a, "GASPRICE", 0, 1);
    def(0x3b, "EXTCODESIZE", 1, 1);
    def(0x3c, "EXTCODECOPY", 4, 0);
    def(0x3d, "RETURNDATASIZE", 0, 1);
    def(0x3e, "RETURNDATACOPY", 3, 0);
    def(0x3f, "EXTCODEHASH", 1, 1);

    def(0x40, "BLOCKHASH", 1, 1);
    def(0x41, "COINBASE", 0, 1);
    def(0x42, "TIMESTAMP", 0, 1);
    def(0x43, "NUMBER", 0, 1);
    def(0x44, "DIFFICULTY", 0, 1);
    def(0x45, "GASLIMIT", 0, 1);
    def(0x46, "CHAINID", 0, 1);
    def(0x47, "SELFBALANCE", 0, 1);
    def(0x48, "BASEFEE", 0, 1);
    def(0x49, "BLOBHASH", 1, 1);
    def(0x4a, "BLOBBASEFEE", 0, 1);

    def(0x50, "POP", 1, 0);
    def(0x51, "MLOAD", 1, 1);
    def(0x52, "MSTORE", 2, 0);
    def(0x53, "MSTORE8", 2, 0);
    def(0x54, "SLOAD", 1, 1);
    def(0x55, "SSTORE", 2, 0);
    def(0x56, "JUMP", 1, 0);
    def(0x57, "JUMPI", 2, 0);
    def(0x58, "PC", 0, 1);
    def(0x59, "MSIZE", 0, 1);
    def(0x5a, "GAS", 0, 1);
    def(0x5b, "JUMPDEST", 0, 0);
    def(0x5c, "TLOAD", 1, 1);
    def(0x5d, "TSTORE", 2, 0);
    def(0x5e, "MCOPY", 3, 0);

    // PUSH0..PUSH32: 0x5f carries no immediate, 0x60+k-1 carries k bytes
    def(0x5f, kPushNames[0], 0, 1);
    for (int k = 1; k <= 32; ++k) {
        uint8_t b = static_cast<uint8_t>(0x5f + k);
        def(b, kPushNames[k], 0, 1);
        t[b].immediate_len = static_cast<uint8_t>(k);
    }
    for (int k = 0; k < 16; ++k) {
        // DUPn reads depth n and pushes a copy; SWAPn touches depth n+1
        def(static_cast<uint8_t>(0x80 + k), kDupNames[k], static_cast<uint8_t>(k + 1),
            static_cast<uint8_t>(k + 2));
        def(static_cast<uint8_t>(0x90 + k), kSwapNames[k], static_cast<uint8_t>(k + 2),
            static_cast<uint8_t>(k + 2));
    }
    for (int k = 0; k <= 4; ++k)
        def(static_cast<uint8_t>(0xa0 + k), kLogNames[k], static_cast<uint8_t>(k + 2), 0);

    def(0xf0, "CREATE", 3, 1);
    def(0xf1, "CALL", 7, 1);
    def(0xf2, "CALLCODE", 7, 1);
    def(0xf3, "RETURN", 2, 0);
    def(0xf4, "DELEGATECALL", 6, 1);
    def(0xf5, "CREATE2", 4, 1);
    def(0xfa, "STATICCALL", 6, 1);
    def(0xfd, "REVERT", 2, 0);
    // 0xfe stays the designated INVALID
    def(0xff, "SELFDESTRUCT", 1, 0);
    t[0xff].is_terminator = true;

    for (uint8_t b : {0x00, 0xf3, 0xfd}) t[b].is_terminator = true;
    t[0x56].is_terminator = true; // JUMP
    t[0x57].is_branch = true;     // JUMPI
    t[0xfe].is_terminator = true;

    return t;
}

} // namespace

const std::array<OpcodeInfo, 256>& opcode_table() {
    static const std::array<OpcodeInfo, 256> table = build_table();
    return table;
}

const OpcodeInfo& decode_opcode(uint8_t byte_value) {
    return opcode_table()[byte_value];
}

} // namespace evmhunt
