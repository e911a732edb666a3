#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spatgen {

using Bytes = std::vector<std::uint8_t>;

enum class EnvelopeErrc {
    MalformedRecord,
    MissingPayload,
    BadHex,
    UnsupportedEncoding,
    PayloadTooShort,
};

const char* to_string(EnvelopeErrc kind);

class EnvelopeError : public std::runtime_error {
public:
    EnvelopeError(EnvelopeErrc kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    EnvelopeErrc kind() const noexcept { return kind_; }

private:
    EnvelopeErrc kind_;
};

struct SecurityFlags {
    bool cert = false;
    bool crypt = false;
    bool prof = false;
    bool sign = false;

    bool operator==(const SecurityFlags&) const = default;
};

// One RSU capture record: the "dot3" transport header plus the raw frame bytes
// of the first UPER-encoded wave element.
struct RawEnvelope {
    std::string channel;
    std::string dest = "ffffffffffff";  // 12 lowercase hex chars
    int priority = 0;                   // 0..7
    std::string psid;
    std::string encoding;
    Bytes payload;
    std::uint64_t seqno = 0;
    std::uint64_t pkgno = 0;
    SecurityFlags security;
    // msg-wave elements that were present but not used (non-UPER or extra).
    std::size_t ignored_elements = 0;

    bool operator==(const RawEnvelope&) const = default;
};

enum class FrameKind { Spat, Map, Bsm, Unknown };

struct MessageKind {
    FrameKind kind = FrameKind::Unknown;
    std::uint32_t raw_id = 0;

    bool operator==(const MessageKind&) const = default;
};

inline constexpr std::uint32_t kMapMessageId = 18;
inline constexpr std::uint32_t kSpatMessageId = 19;
inline constexpr std::uint32_t kBsmMessageId = 20;

/// Parses one line of a newline-delimited capture file. Unknown keys are ignored.
RawEnvelope parse_envelope(std::string_view record);

/// Routes a frame by its MessageFrame identifier without decoding the body.
/// Garbage never throws; only inputs shorter than two bytes do.
MessageKind classify_payload(std::span<const std::uint8_t> payload);

Bytes hex_decode(std::string_view hex);
std::string hex_encode(std::span<const std::uint8_t> bytes);

}  // namespace spatgen
