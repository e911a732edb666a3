#include "spatgen/envelope.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>

namespace spatgen {

using nlohmann::json;

const char* to_string(EnvelopeErrc kind) {
    switch (kind) {
        case EnvelopeErrc::MalformedRecord: return "MalformedRecord";
        case EnvelopeErrc::MissingPayload: return "MissingPayload";
        case EnvelopeErrc::BadHex: return "BadHex";
        case EnvelopeErrc::UnsupportedEncoding: return "UnsupportedEncoding";
        case EnvelopeErrc::PayloadTooShort: return "PayloadTooShort";
    }
    return "?";
}

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

bool is_hex_string(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return hex_nibble(c) >= 0; });
}

[[noreturn]] void malformed(const std::string& why) {
    throw EnvelopeError(EnvelopeErrc::MalformedRecord, "malformed record: " + why);
}

template <typename T>
T get_uint(const json& obj, const char* key, T fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer() || it->get<long long>() < 0) {
        malformed(std::string("'") + key + "' must be a non-negative integer");
    }
    return it->get<T>();
}

std::string get_string(const json& obj, const char* key, std::string fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_string()) malformed(std::string("'") + key + "' must be a string");
    return it->get<std::string>();
}

bool get_bool(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) return false;
    if (!it->is_boolean()) malformed(std::string("'") + key + "' must be a boolean");
    return it->get<bool>();
}

}  // namespace

Bytes hex_decode(std::string_view hex) {
    if (hex.empty()) throw EnvelopeError(EnvelopeErrc::BadHex, "empty hex payload");
    if (hex.size() % 2 != 0) throw EnvelopeError(EnvelopeErrc::BadHex, "odd-length hex payload");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) {
            throw EnvelopeError(EnvelopeErrc::BadHex,
                                "non-hex character at offset " + std::to_string(hi < 0 ? i : i + 1));
        }
        out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return out;
}

std::string hex_encode(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

RawEnvelope parse_envelope(std::string_view record) {
    json doc = json::parse(record.begin(), record.end(), nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) malformed("not valid JSON");
    if (!doc.is_object()) malformed("top level is not an object");

    auto waves = doc.find("msg-wave");
    if (waves == doc.end() || !waves->is_array() || waves->empty()) {
        malformed("missing or empty 'msg-wave' array");
    }

    const json* chosen = nullptr;
    std::string first_encoding;
    std::size_t with_encoding = 0;
    for (const auto& wave : *waves) {
        if (!wave.is_object()) malformed("'msg-wave' element is not an object");
        auto enc = wave.find("encoding");
        if (enc == wave.end()) continue;
        if (!enc->is_string()) malformed("'encoding' must be a string");
        ++with_encoding;
        if (first_encoding.empty()) first_encoding = enc->get<std::string>();
        if (!chosen && enc->get<std::string>() == "UPER") chosen = &wave;
    }
    if (with_encoding == 0) malformed("no 'msg-wave' element carries an 'encoding'");
    if (!chosen) {
        throw EnvelopeError(EnvelopeErrc::UnsupportedEncoding,
                            "unsupported encoding '" + first_encoding + "'");
    }

    auto payload = chosen->find("payload");
    if (payload == chosen->end()) {
        throw EnvelopeError(EnvelopeErrc::MissingPayload, "UPER element has no 'payload'");
    }
    if (!payload->is_string()) {
        throw EnvelopeError(EnvelopeErrc::BadHex, "'payload' is not a string");
    }

    RawEnvelope env;
    env.encoding = "UPER";
    env.payload = hex_decode(payload->get_ref<const std::string&>());
    if (env.payload.size() < 2) {
        throw EnvelopeError(EnvelopeErrc::PayloadTooShort, "payload shorter than two bytes");
    }
    env.ignored_elements = waves->size() - 1;

    if (auto dot3 = chosen->find("dot3"); dot3 != chosen->end()) {
        if (!dot3->is_object()) malformed("'dot3' is not an object");
        env.channel = get_string(*dot3, "chan", "");
        env.psid = get_string(*dot3, "psid", "");
        std::string dest = get_string(*dot3, "dest", env.dest);
        if (dest.size() != 12 || !is_hex_string(dest)) malformed("'dest' must be 12 hex characters");
        std::transform(dest.begin(), dest.end(), dest.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        env.dest = std::move(dest);
        env.priority = get_uint<int>(*dot3, "priority", 0);
        if (env.priority > 7) malformed("'priority' must be within 0..7");
        if (auto sec = dot3->find("security"); sec != dot3->end()) {
            if (!sec->is_object()) malformed("'security' is not an object");
            env.security = {get_bool(*sec, "cert"), get_bool(*sec, "crypt"),
                            get_bool(*sec, "prof"), get_bool(*sec, "sign")};
        }
    }

    env.seqno = get_uint<std::uint64_t>(doc, "seqno", 0);
    env.pkgno = get_uint<std::uint64_t>(doc, "pkgno", 0);
    return env;
}

MessageKind classify_payload(std::span<const std::uint8_t> payload) {
    if (payload.size() < 2) {
        throw EnvelopeError(EnvelopeErrc::PayloadTooShort, "payload shorter than two bytes");
    }
    // MessageFrame: one extension bit, then messageId as a 15-bit constrained integer.
    const std::uint32_t head = (std::uint32_t{payload[0]} << 8) | payload[1];
    const std::uint32_t id = head & 0x7fff;
    switch (id) {
        case kSpatMessageId: return {FrameKind::Spat, id};
        case kMapMessageId: return {FrameKind::Map, id};
        case kBsmMessageId: return {FrameKind::Bsm, id};
        default: return {FrameKind::Unknown, id};
    }
}

}  // namespace spatgen
