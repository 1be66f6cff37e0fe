#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scenetok/vocabulary.hpp"

namespace scenetok {

// Text form: one sequence per line, tokens separated by single spaces.
void write_token_line(std::ostream& out, std::span<const std::string> tokens);
std::vector<std::string> split_token_line(std::string_view line);

// Same, for integer IDs.
void write_id_line(std::ostream& out, std::span<const TokenId> ids);
std::vector<TokenId> parse_id_line(std::string_view line);

// Sidecar weights: one line of floats per sequence, parallel to the IDs.
void write_weight_line(std::ostream& out, std::span<const double> weights);

// Binary form: magic "STK1", then per record an unsigned LEB128 length
// followed by that many LEB128-encoded IDs.
inline constexpr std::string_view kBinaryStreamMagic = "STK1";

void append_varint(std::string& buf, std::uint64_t value);
// Decodes one varint at `pos`, advancing it. Throws SchemaError on truncation
// or a value wider than 64 bits.
std::uint64_t read_varint(std::string_view buf, std::size_t& pos);

class BinaryStreamWriter {
public:
    explicit BinaryStreamWriter(std::ostream& out);
    void write(std::span<const TokenId> ids);

private:
    std::ostream& out_;
    std::string buf_;
};

std::vector<std::vector<TokenId>> read_binary_stream(std::istream& in);

}  // namespace scenetok
