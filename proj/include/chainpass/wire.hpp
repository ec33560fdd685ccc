#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "chainpass/crypto.hpp"

namespace chainpass {

// SMS sender/receiver address: 6..15 ASCII decimal digits.
class PhoneNumber {
public:
    PhoneNumber() = default;
    static Result<PhoneNumber> parse(const std::string& digits);
    const std::string& digits() const { return digits_; }
    friend bool operator==(const PhoneNumber&, const PhoneNumber&) = default;
    friend auto operator<=>(const PhoneNumber&, const PhoneNumber&) = default;

private:
    explicit PhoneNumber(std::string d) : digits_(std::move(d)) {}
    std::string digits_;
};

struct RegistrationRequest {
    std::string user_id;
    std::string server_id;
    friend bool operator==(const RegistrationRequest&, const RegistrationRequest&) = default;
};

struct TspRegistrationForward {
    std::string user_id;
    PhoneNumber user_phone;
    SessionKey key;
    friend bool operator==(const TspRegistrationForward&, const TspRegistrationForward&) = default;
};

struct RegistrationResponse {
    std::string server_id;
    ServerSeed seed;
    PhoneNumber server_phone;
    SessionKey key;
    friend bool operator==(const RegistrationResponse&, const RegistrationResponse&) = default;
};

struct RegistrationSms {
    std::string user_id;
    AuthenticatedEnvelope envelope;
    friend bool operator==(const RegistrationSms&, const RegistrationSms&) = default;
};

struct LoginRequest {
    std::string user_id;
    friend bool operator==(const LoginRequest&, const LoginRequest&) = default;
};

struct ServerChallenge {
    std::string server_id;
    Nonce server_nonce;
    friend bool operator==(const ServerChallenge&, const ServerChallenge&) = default;
};

struct LoginSms {
    std::string user_id;
    AuthenticatedEnvelope envelope;
    friend bool operator==(const LoginSms&, const LoginSms&) = default;
};

struct LoginSuccess {
    Digest32 digest{};
    friend bool operator==(const LoginSuccess&, const LoginSuccess&) = default;
};

struct RecoveryRequest {
    std::string user_id;
    std::string server_id;
    friend bool operator==(const RecoveryRequest&, const RecoveryRequest&) = default;
};

struct TspRecoveryForward {
    std::string user_id;
    PhoneNumber user_phone;
    friend bool operator==(const TspRecoveryForward&, const TspRecoveryForward&) = default;
};

struct RecoveryResponse {
    std::string server_id;
    ServerSeed seed;
    PhoneNumber server_phone;
    uint32_t next_index = 0;
    Nonce server_nonce;
    friend bool operator==(const RecoveryResponse&, const RecoveryResponse&) = default;
};

struct RecoverySms {
    std::string user_id;
    AuthenticatedEnvelope envelope;
    friend bool operator==(const RecoverySms&, const RecoverySms&) = default;
};

using Message =
    std::variant<RegistrationRequest, TspRegistrationForward, RegistrationResponse,
                 RegistrationSms, LoginRequest, ServerChallenge, LoginSms, LoginSuccess,
                 RecoveryRequest, TspRecoveryForward, RecoveryResponse, RecoverySms>;

namespace wire {

inline constexpr uint8_t kMagic = 0x4F;
inline constexpr uint8_t kVersion = 0x01;

uint8_t kind_code(const Message& m);
const char* kind_name(const Message& m);

// Frame layout: magic, version, msg_type, then each field as 4-byte
// big-endian length plus bytes. Field count and order are fixed per kind;
// decode(encode(m)) == m and trailing bytes are rejected.
Bytes encode(const Message& m);
Result<Message> decode(BytesView bytes);

}  // namespace wire
}  // namespace chainpass
