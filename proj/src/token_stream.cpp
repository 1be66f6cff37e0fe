#include "scenetok/token_stream.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>

#include "scenetok/errors.hpp"

namespace scenetok {

void write_token_line(std::ostream& out, std::span<const std::string> tokens) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out << ' ';
        out << tokens[i];
    }
    out << '\n';
}

std::vector<std::string> split_token_line(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start));
    }
    return out;
}

void write_id_line(std::ostream& out, std::span<const TokenId> ids) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out << ' ';
        out << ids[i];
    }
    out << '\n';
}

std::vector<TokenId> parse_id_line(std::string_view line) {
    std::vector<TokenId> ids;
    for (const auto& tok : split_token_line(line)) {
        TokenId v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || ptr != tok.data() + tok.size()) throw SchemaError("bad token ID '" + tok + "'");
        ids.push_back(v);
    }
    return ids;
}

void write_weight_line(std::ostream& out, std::span<const double> weights) {
    char buf[32];
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (i) out << ' ';
        std::snprintf(buf, sizeof buf, "%g", weights[i]);
        out << buf;
    }
    out << '\n';
}

void append_varint(std::string& buf, std::uint64_t value) {
    while (value >= 0x80) {
        buf.push_back(static_cast<char>((value & 0x7f) | 0x80));
        value >>= 7;
    }
    buf.push_back(static_cast<char>(value));
}

std::uint64_t read_varint(std::string_view buf, std::size_t& pos) {
    std::uint64_t value = 0;
    for (int shift = 0; shift < 64; shift += 7) {
        if (pos >= buf.size()) throw SchemaError("truncated varint in token stream");
        auto byte = static_cast<std::uint8_t>(buf[pos++]);
        if (shift == 63 && byte > 1) throw SchemaError("varint overflows 64 bits");
        value |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
        if (!(byte & 0x80)) return value;
    }
    throw SchemaError("varint overflows 64 bits");
}

BinaryStreamWriter::BinaryStreamWriter(std::ostream& out) : out_(out) {
    out_.write(kBinaryStreamMagic.data(), static_cast<std::streamsize>(kBinaryStreamMagic.size()));
}

void BinaryStreamWriter::write(std::span<const TokenId> ids) {
    buf_.clear();
    append_varint(buf_, ids.size());
    for (auto id : ids) append_varint(buf_, id);
    out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
}

std::vector<std::vector<TokenId>> read_binary_stream(std::istream& in) {
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.compare(0, kBinaryStreamMagic.size(), kBinaryStreamMagic) != 0) {
        throw SchemaError("token stream lacks the STK1 magic");
    }
    std::vector<std::vector<TokenId>> records;
    std::size_t pos = kBinaryStreamMagic.size();
    while (pos < data.size()) {
        std::uint64_t n = read_varint(data, pos);
        if (n > data.size() - pos) throw SchemaError("token stream record longer than the file");
        std::vector<TokenId> ids;
        ids.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i) {
            std::uint64_t v = read_varint(data, pos);
            if (v > std::numeric_limits<TokenId>::max()) throw SchemaError("token ID exceeds 32 bits");
            ids.push_back(static_cast<TokenId>(v));
        }
        records.push_back(std::move(ids));
    }
    return records;
}

}  // namespace scenetok
