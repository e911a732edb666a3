#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace spatgen {

enum class CodecErrc {
    WrongMessageId,
    TruncatedBitstream,
    ConstraintViolation,
    UnsupportedExtension,
};

const char* to_string(CodecErrc kind);

class CodecError : public std::runtime_error {
public:
    CodecError(CodecErrc kind, std::size_t bit_offset, const std::string& what);

    CodecErrc kind() const noexcept { return kind_; }
    // Bit position (from the start of the buffer) where the problem was detected.
    std::size_t bit_offset() const noexcept { return bit_offset_; }

private:
    CodecErrc kind_;
    std::size_t bit_offset_;
};

/// Number of bits UPER uses for an integer constrained to [lo, hi].
unsigned constrained_width(std::int64_t lo, std::int64_t hi);

// MSB-first reader over an immutable byte buffer. Never reads past the end.
class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> buffer) noexcept
        : buffer_(buffer), limit_(buffer.size() * 8) {}

    std::size_t cursor() const noexcept { return cursor_; }
    std::size_t bits_left() const noexcept { return limit_ - cursor_; }

    bool read_bit();
    std::uint64_t read_bits(unsigned count);  // count <= 64
    void skip_to_octet();
    void skip_bits(std::size_t count);

    // Restricts further reads to the next `bits` bits (open-type content).
    // Returns the previous limit so it can be restored.
    std::size_t narrow(std::size_t bits);
    void restore_limit(std::size_t limit, std::size_t resume_at);

private:
    void need(unsigned count) const;

    std::span<const std::uint8_t> buffer_;
    std::size_t cursor_ = 0;
    std::size_t limit_;
};

class BitWriter {
public:
    void write_bit(bool bit);
    void write_bits(std::uint64_t value, unsigned count);  // low `count` bits, MSB first
    void pad_to_octet();

    std::size_t bit_length() const noexcept { return bits_; }
    // Final byte zero-padded.
    const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t bits_ = 0;
};

/// Reads an integer constrained to [lo, hi]: offset from lo in constrained_width bits.
std::int64_t read_constrained_int(BitReader& reader, std::int64_t lo, std::int64_t hi);
void write_constrained_int(BitWriter& writer, std::int64_t value, std::int64_t lo, std::int64_t hi);

/// Unconstrained length determinant (X.691 10.9), single-fragment forms only.
std::size_t read_length_determinant(BitReader& reader);
void write_length_determinant(BitWriter& writer, std::size_t length);

// Where each piece of an open type's octets sits in the bitstream.
struct OctetSegment {
    std::size_t bit_start = 0;
    std::size_t octets = 0;
};

/// Reads an open-type length prefix (fragmented forms included) and skips over
/// the content, leaving the cursor after it.
std::vector<OctetSegment> read_open_type(BitReader& reader);
void write_open_type(BitWriter& writer, std::span<const std::uint8_t> octets);

}  // namespace spatgen
