#include "chainpass/wire.hpp"

#include <algorithm>

namespace chainpass {

Result<PhoneNumber> PhoneNumber::parse(const std::string& digits) {
    if (digits.size() < 6 || digits.size() > 15) return Err::invalid_argument;
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
        return Err::invalid_argument;
    return PhoneNumber(digits);
}

namespace wire {
namespace {

constexpr uint8_t kRegistrationRequest = 0x01;
constexpr uint8_t kTspRegistrationForward = 0x02;
constexpr uint8_t kRegistrationResponse = 0x03;
constexpr uint8_t kRegistrationSms = 0x04;
constexpr uint8_t kLoginRequest = 0x05;
constexpr uint8_t kServerChallenge = 0x06;
constexpr uint8_t kLoginSms = 0x07;
constexpr uint8_t kLoginSuccess = 0x08;
constexpr uint8_t kRecoveryRequest = 0x09;
constexpr uint8_t kTspRecoveryForward = 0x0A;
constexpr uint8_t kRecoveryResponse = 0x0B;
constexpr uint8_t kRecoverySms = 0x0C;

void put_envelope(std::vector<Bytes>& fields, const AuthenticatedEnvelope& env) {
    fields.push_back(env.ciphertext);
    fields.emplace_back(env.iv.begin(), env.iv.end());
    fields.emplace_back(env.mac.begin(), env.mac.end());
}

std::vector<Bytes> fields_of(const Message& m) {
    std::vector<Bytes> f;
    std::visit(
        [&](const auto& msg) {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, RegistrationRequest>) {
                f = {to_bytes(msg.user_id), to_bytes(msg.server_id)};
            } else if constexpr (std::is_same_v<T, TspRegistrationForward>) {
                f = {to_bytes(msg.user_id), to_bytes(msg.user_phone.digits()),
                     Bytes(msg.key.bytes.begin(), msg.key.bytes.end())};
            } else if constexpr (std::is_same_v<T, RegistrationResponse>) {
                f = {to_bytes(msg.server_id), Bytes(msg.seed.bytes.begin(), msg.seed.bytes.end()),
                     to_bytes(msg.server_phone.digits()),
                     Bytes(msg.key.bytes.begin(), msg.key.bytes.end())};
            } else if constexpr (std::is_same_v<T, RegistrationSms>) {
                f = {to_bytes(msg.user_id)};
                put_envelope(f, msg.envelope);
            } else if constexpr (std::is_same_v<T, LoginRequest>) {
                f = {to_bytes(msg.user_id)};
            } else if constexpr (std::is_same_v<T, ServerChallenge>) {
                f = {to_bytes(msg.server_id),
                     Bytes(msg.server_nonce.bytes.begin(), msg.server_nonce.bytes.end())};
            } else if constexpr (std::is_same_v<T, LoginSms>) {
                f = {to_bytes(msg.user_id)};
                put_envelope(f, msg.envelope);
            } else if constexpr (std::is_same_v<T, LoginSuccess>) {
                f = {Bytes(msg.digest.begin(), msg.digest.end())};
            } else if constexpr (std::is_same_v<T, RecoveryRequest>) {
                f = {to_bytes(msg.user_id), to_bytes(msg.server_id)};
            } else if constexpr (std::is_same_v<T, TspRecoveryForward>) {
                f = {to_bytes(msg.user_id), to_bytes(msg.user_phone.digits())};
            } else if constexpr (std::is_same_v<T, RecoveryResponse>) {
                Bytes idx;
                append_be32(idx, msg.next_index);
                f = {to_bytes(msg.server_id), Bytes(msg.seed.bytes.begin(), msg.seed.bytes.end()),
                     to_bytes(msg.server_phone.digits()), idx,
                     Bytes(msg.server_nonce.bytes.begin(), msg.server_nonce.bytes.end())};
            } else if constexpr (std::is_same_v<T, RecoverySms>) {
                f = {to_bytes(msg.user_id)};
                put_envelope(f, msg.envelope);
            }
        },
        m);
    return f;
}

std::string take_string(const Bytes& b) { return std::string(b.begin(), b.end()); }

template <size_t N>
bool take_array(const Bytes& b, std::array<uint8_t, N>& out) {
    if (b.size() != N) return false;
    std::copy(b.begin(), b.end(), out.begin());
    return true;
}

bool take_phone(const Bytes& b, PhoneNumber& out) {
    auto p = PhoneNumber::parse(take_string(b));
    if (!p) return false;
    out = p.value();
    return true;
}

bool take_envelope(const Bytes& ct, const Bytes& iv, const Bytes& mac,
                   AuthenticatedEnvelope& out) {
    if (ct.empty() || ct.size() % 16 != 0) return false;
    out.ciphertext = ct;
    return take_array(iv, out.iv) && take_array(mac, out.mac);
}

}  // namespace

uint8_t kind_code(const Message& m) {
    return static_cast<uint8_t>(m.index() + 1);
}

const char* kind_name(const Message& m) {
    static constexpr const char* kNames[] = {
        "RegistrationRequest", "TspRegistrationForward", "RegistrationResponse",
        "RegistrationSms",     "LoginRequest",           "ServerChallenge",
        "LoginSms",            "LoginSuccess",           "RecoveryRequest",
        "TspRecoveryForward",  "RecoveryResponse",       "RecoverySms"};
    return kNames[m.index()];
}

Bytes encode(const Message& m) {
    Bytes out{kMagic, kVersion, kind_code(m)};
    for (const auto& field : fields_of(m)) append_length_prefixed(out, field);
    return out;
}

Result<Message> decode(BytesView bytes) {
    if (bytes.size() < 3 || bytes[0] != kMagic || bytes[1] != kVersion)
        return Err::unsupported_frame;
    uint8_t code = bytes[2];
    if (code < kRegistrationRequest || code > kRecoverySms) return Err::unknown_kind;

    auto fields_opt = split_length_prefixed(bytes.subspan(3));
    if (!fields_opt) return Err::malformed_frame;
    const auto& f = *fields_opt;

    auto arity_ok = [&](size_t n) { return f.size() == n; };

    switch (code) {
        case kRegistrationRequest: {
            if (!arity_ok(2)) return Err::malformed_frame;
            return Message{RegistrationRequest{take_string(f[0]), take_string(f[1])}};
        }
        case kTspRegistrationForward: {
            if (!arity_ok(3)) return Err::malformed_frame;
            TspRegistrationForward m;
            m.user_id = take_string(f[0]);
            if (!take_phone(f[1], m.user_phone) || !take_array(f[2], m.key.bytes))
                return Err::malformed_frame;
            return Message{m};
        }
        case kRegistrationResponse: {
            if (!arity_ok(4)) return Err::malformed_frame;
            RegistrationResponse m;
            m.server_id = take_string(f[0]);
            if (!take_array(f[1], m.seed.bytes) || !take_phone(f[2], m.server_phone) ||
                !take_array(f[3], m.key.bytes))
                return Err::malformed_frame;
            return Message{m};
        }
        case kRegistrationSms: {
            if (!arity_ok(4)) return Err::malformed_frame;
            RegistrationSms m;
            m.user_id = take_string(f[0]);
            if (!take_envelope(f[1], f[2], f[3], m.envelope)) return Err::malformed_frame;
            return Message{m};
        }
        case kLoginRequest: {
            if (!arity_ok(1)) return Err::malformed_frame;
            return Message{LoginRequest{take_string(f[0])}};
        }
        case kServerChallenge: {
            if (!arity_ok(2)) return Err::malformed_frame;
            ServerChallenge m;
            m.server_id = take_string(f[0]);
            if (!take_array(f[1], m.server_nonce.bytes)) return Err::malformed_frame;
            return Message{m};
        }
        case kLoginSms: {
            if (!arity_ok(4)) return Err::malformed_frame;
            LoginSms m;
            m.user_id = take_string(f[0]);
            if (!take_envelope(f[1], f[2], f[3], m.envelope)) return Err::malformed_frame;
            return Message{m};
        }
        case kLoginSuccess: {
            if (!arity_ok(1)) return Err::malformed_frame;
            LoginSuccess m;
            if (!take_array(f[0], m.digest)) return Err::malformed_frame;
            return Message{m};
        }
        case kRecoveryRequest: {
            if (!arity_ok(2)) return Err::malformed_frame;
            return Message{RecoveryRequest{take_string(f[0]), take_string(f[1])}};
        }
        case kTspRecoveryForward: {
            if (!arity_ok(2)) return Err::malformed_frame;
            TspRecoveryForward m;
            m.user_id = take_string(f[0]);
            if (!take_phone(f[1], m.user_phone)) return Err::malformed_frame;
            return Message{m};
        }
        case kRecoveryResponse: {
            if (!arity_ok(5)) return Err::malformed_frame;
            RecoveryResponse m;
            m.server_id = take_string(f[0]);
            auto idx = read_be32(f[3]);
            if (!take_array(f[1], m.seed.bytes) || !take_phone(f[2], m.server_phone) ||
                f[3].size() != 4 || !idx || !take_array(f[4], m.server_nonce.bytes))
                return Err::malformed_frame;
            m.next_index = *idx;
            return Message{m};
        }
        case kRecoverySms: {
            if (!arity_ok(4)) return Err::malformed_frame;
            RecoverySms m;
            m.user_id = take_string(f[0]);
            if (!take_envelope(f[1], f[2], f[3], m.envelope)) return Err::malformed_frame;
            return Message{m};
        }
    }
    return Err::unknown_kind;
}

}  // namespace wire
}  // namespace chainpass
