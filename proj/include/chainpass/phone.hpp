#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "chainpass/crypto.hpp"
#include "chainpass/wire.hpp"

namespace chainpass {

// Per-server state the phone keeps after registration. Holds neither the
// long-term password nor the credential.
struct DeviceRecord {
    std::string server_id;
    PhoneNumber server_phone;
    ServerSeed seed;
    uint32_t next_index = 0;
    uint32_t chain_length = 0;
    friend bool operator==(const DeviceRecord&, const DeviceRecord&) = default;
};

// Session state between sending a login SMS and checking the server's
// success digest. Discarded on any failure.
struct PendingLogin {
    std::string server_id;
    Nonce server_nonce;
    Nonce device_nonce;
    OneTimePassword otp;
};

enum class LoginOutcome { accepted, rejected };

class PhoneAgent {
public:
    PhoneAgent(std::string user_id, uint32_t chain_length)
        : user_id_(std::move(user_id)), chain_length_(chain_length) {}

    const std::string& user_id() const { return user_id_; }

    Result<RegistrationRequest> begin_registration(const std::string& server_id);
    Result<RegistrationSms> complete_registration(const RegistrationResponse& response,
                                                  const LongTermPassword& password, Rng& rng);

    Result<LoginSms> build_login_sms(const ServerChallenge& challenge,
                                     const LongTermPassword& password, Rng& rng);
    Result<LoginOutcome> verify_success(const LoginSuccess& message);

    RecoveryRequest begin_recovery(const std::string& server_id);
    Result<RecoverySms> complete_recovery(const RecoveryResponse& response,
                                          const LongTermPassword& password, Rng& rng);

    const DeviceRecord* record(const std::string& server_id) const;
    bool has_pending_login() const { return pending_login_.has_value(); }

    // Serialization of everything the agent holds, for secret-hygiene audits.
    Bytes state_snapshot() const;

private:
    std::string user_id_;
    uint32_t chain_length_;
    std::map<std::string, DeviceRecord> records_;
    std::set<std::string> pending_registrations_;
    std::set<std::string> pending_recoveries_;
    std::optional<PendingLogin> pending_login_;
};

}  // namespace chainpass
