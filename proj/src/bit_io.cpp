#include "spatgen/bit_io.hpp"

#include <algorithm>

namespace spatgen {

const char* to_string(CodecErrc kind) {
    switch (kind) {
        case CodecErrc::WrongMessageId: return "WrongMessageId";
        case CodecErrc::TruncatedBitstream: return "TruncatedBitstream";
        case CodecErrc::ConstraintViolation: return "ConstraintViolation";
        case CodecErrc::UnsupportedExtension: return "UnsupportedExtension";
    }
    return "?";
}

CodecError::CodecError(CodecErrc kind, std::size_t bit_offset, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + " at bit " + std::to_string(bit_offset) +
                         ": " + what),
      kind_(kind),
      bit_offset_(bit_offset) {}

unsigned constrained_width(std::int64_t lo, std::int64_t hi) {
    std::uint64_t range = static_cast<std::uint64_t>(hi - lo);  // number of values minus one
    unsigned width = 0;
    while (range > 0) {
        ++width;
        range >>= 1;
    }
    return width;
}

void BitReader::need(unsigned count) const {
    if (count > limit_ - cursor_) {
        throw CodecError(CodecErrc::TruncatedBitstream, cursor_,
                         "need " + std::to_string(count) + " bits, " +
                             std::to_string(limit_ - cursor_) + " left");
    }
}

bool BitReader::read_bit() {
    need(1);
    const bool bit = (buffer_[cursor_ >> 3] >> (7 - (cursor_ & 7))) & 1;
    ++cursor_;
    return bit;
}

std::uint64_t BitReader::read_bits(unsigned count) {
    need(count);
    std::uint64_t value = 0;
    for (unsigned i = 0; i < count; ++i) {
        const std::size_t pos = cursor_ + i;
        value = (value << 1) | ((buffer_[pos >> 3] >> (7 - (pos & 7))) & 1u);
    }
    cursor_ += count;
    return value;
}

void BitReader::skip_to_octet() {
    const unsigned rem = static_cast<unsigned>(cursor_ & 7);
    if (rem != 0) {
        need(8 - rem);
        cursor_ += 8 - rem;
    }
}

void BitReader::skip_bits(std::size_t count) {
    if (count > bits_left()) {
        throw CodecError(CodecErrc::TruncatedBitstream, cursor_, "skip past end of data");
    }
    cursor_ += count;
}

std::size_t BitReader::narrow(std::size_t bits) {
    if (bits > limit_ - cursor_) {
        throw CodecError(CodecErrc::TruncatedBitstream, cursor_,
                         "open type of " + std::to_string(bits) + " bits exceeds buffer");
    }
    const std::size_t previous = limit_;
    limit_ = cursor_ + bits;
    return previous;
}

void BitReader::restore_limit(std::size_t limit, std::size_t resume_at) {
    limit_ = limit;
    cursor_ = resume_at;
}

void BitWriter::write_bit(bool bit) {
    if ((bits_ & 7) == 0) bytes_.push_back(0);
    if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ & 7));
    ++bits_;
}

void BitWriter::write_bits(std::uint64_t value, unsigned count) {
    for (unsigned i = count; i > 0; --i) write_bit((value >> (i - 1)) & 1u);
}

void BitWriter::pad_to_octet() {
    while ((bits_ & 7) != 0) write_bit(false);
}

std::int64_t read_constrained_int(BitReader& reader, std::int64_t lo, std::int64_t hi) {
    const std::size_t at = reader.cursor();
    const std::uint64_t offset = reader.read_bits(constrained_width(lo, hi));
    if (offset > static_cast<std::uint64_t>(hi - lo)) {
        throw CodecError(CodecErrc::ConstraintViolation, at,
                         "value " + std::to_string(lo + static_cast<std::int64_t>(offset)) +
                             " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return lo + static_cast<std::int64_t>(offset);
}

void write_constrained_int(BitWriter& writer, std::int64_t value, std::int64_t lo, std::int64_t hi) {
    if (value < lo || value > hi) {
        throw CodecError(CodecErrc::ConstraintViolation, writer.bit_length(),
                         "value " + std::to_string(value) + " outside [" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "]");
    }
    writer.write_bits(static_cast<std::uint64_t>(value - lo), constrained_width(lo, hi));
}

std::size_t read_length_determinant(BitReader& reader) {
    const std::size_t at = reader.cursor();
    if (!reader.read_bit()) return reader.read_bits(7);
    if (!reader.read_bit()) return reader.read_bits(14);
    throw CodecError(CodecErrc::UnsupportedExtension, at, "fragmented length determinant");
}

void write_length_determinant(BitWriter& writer, std::size_t length) {
    if (length < 128) {
        writer.write_bits(length, 8);
    } else if (length < 16384) {
        writer.write_bits(0x8000u | length, 16);
    } else {
        throw CodecError(CodecErrc::ConstraintViolation, writer.bit_length(),
                         "length " + std::to_string(length) + " needs fragmentation");
    }
}

std::vector<OctetSegment> read_open_type(BitReader& reader) {
    constexpr std::size_t kFragment = 16384;
    std::vector<OctetSegment> segments;
    for (;;) {
        const std::size_t at = reader.cursor();
        const auto head = reader.read_bits(2);
        std::size_t octets = 0;
        bool last = true;
        if (head < 2) {
            octets = reader.read_bits(6) | (head << 6);
        } else if (head == 2) {
            octets = reader.read_bits(14);
        } else {
            const auto m = reader.read_bits(6);
            if (m < 1 || m > 4) throw CodecError(CodecErrc::ConstraintViolation, at, "fragment multiplier " + std::to_string(m));
            octets = m * kFragment;
            last = false;
        }
        if (octets * 8 > reader.bits_left()) {
            throw CodecError(CodecErrc::TruncatedBitstream, reader.cursor(),
                             "open type needs " + std::to_string(octets) + " more octets");
        }
        segments.push_back({reader.cursor(), octets});
        reader.skip_bits(octets * 8);
        if (last) return segments;
    }
}

void write_open_type(BitWriter& writer, std::span<const std::uint8_t> octets) {
    constexpr std::size_t kFragment = 16384;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t left = octets.size() - pos;
        std::size_t chunk = left;
        if (left >= kFragment) {
            const std::size_t m = std::min<std::size_t>(4, left / kFragment);
            writer.write_bits(0xc0u | m, 8);
            chunk = m * kFragment;
        } else {
            write_length_determinant(writer, left);
        }
        for (std::size_t i = 0; i < chunk; ++i) writer.write_bits(octets[pos + i], 8);
        pos += chunk;
        if (left < kFragment) return;
    }
}

}  // namespace spatgen
