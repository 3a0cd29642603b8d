#include "evmhunt/hex.hpp"

#include "evmhunt/error.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace evmhunt {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::vector<uint8_t> parse_hex(std::string_view text) {
    std::string digits;
    digits.reserve(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '0' && i + 1 < text.size() && (text[i + 1] == 'x' || text[i + 1] == 'X') &&
            digits.empty()) {
            ++i; // skip prefix
            continue;
        }
        digits.push_back(c);
    }
    if (digits.size() % 2 != 0)
        throw DataError("odd number of hex digits (" + std::to_string(digits.size()) + ")");
    std::vector<uint8_t> out;
    out.reserve(digits.size() / 2);
    for (size_t i = 0; i < digits.size(); i += 2) {
        int hi = hex_digit(digits[i]);
        int lo = hex_digit(digits[i + 1]);
        if (hi < 0 || lo < 0)
            throw DataError(std::string("invalid hex character '") + digits[hi < 0 ? i : i + 1] +
                            "'");
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

std::string to_hex(const uint8_t* data, size_t len) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0xf]);
    }
    return out;
}

std::string to_hex(const std::vector<uint8_t>& bytes) {
    return to_hex(bytes.data(), bytes.size());
}

ContractBytecode read_bytecode_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open bytecode file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    ContractBytecode code;
    code.raw = parse_hex(ss.str());
    code.id = std::filesystem::path(path).stem().string();
    return code;
}

} // namespace evmhunt
