#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace evmhunt {

// Raw contract bytecode plus an identifier used in datasets and reports.
struct ContractBytecode {
    std::vector<uint8_t> raw;
    std::string id;
};

// Parses hex text: optional 0x prefix, whitespace ignored anywhere.
// Throws DataError on odd digit count or non-hex characters.
std::vector<uint8_t> parse_hex(std::string_view text);

std::string to_hex(const std::vector<uint8_t>& bytes);
std::string to_hex(const uint8_t* data, size_t len);

// Reads a whole hex text file into bytecode; id defaults to the file stem.
ContractBytecode read_bytecode_file(const std::string& path);

} // namespace evmhunt
