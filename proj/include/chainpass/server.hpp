#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "chainpass/crypto.hpp"
#include "chainpass/wire.hpp"

namespace chainpass {

enum class AccountStatus { pending, active, recovering };

const char* to_string(AccountStatus s);

struct AccountRecord {
    std::string user_id;
    PhoneNumber user_phone;
    Credential credential;  // all-zero while pending
    ServerSeed seed;
    uint32_t next_index = 0;
    uint32_t chain_length = 0;
    AccountStatus status = AccountStatus::pending;
    // Registration key, held only while pending; never persisted.
    std::optional<SessionKey> registration_key;
    friend bool operator==(const AccountRecord&, const AccountRecord&) = default;
};

struct OutstandingChallenge {
    Nonce server_nonce;
    uint64_t issued_at = 0;
};

struct OutstandingRecovery {
    Nonce server_nonce;
    ServerSeed offered_seed;
    uint32_t offered_index = 0;
    bool reseed = false;
    uint32_t key_index = 0;  // chain index the recovery envelope must be keyed with
};

class ServerAgent {
public:
    ServerAgent(std::string server_id, PhoneNumber phone, uint32_t chain_length,
                uint64_t challenge_ttl = 100)
        : server_id_(std::move(server_id)),
          phone_(std::move(phone)),
          chain_length_(chain_length),
          challenge_ttl_(challenge_ttl) {}

    const std::string& server_id() const { return server_id_; }
    const PhoneNumber& phone() const { return phone_; }

    // Simulation time, used only for challenge expiry.
    void set_clock(uint64_t tick) { now_ = tick; }

    Result<RegistrationResponse> handle_tsp_registration(const TspRegistrationForward& forward,
                                                         Rng& rng);
    Result<Unit> handle_registration_sms(const RegistrationSms& sms, const PhoneNumber& sender);

    Result<ServerChallenge> issue_challenge(const LoginRequest& request, Rng& rng);
    Result<LoginSuccess> verify_login_sms(const LoginSms& sms, const PhoneNumber& sender);

    Result<RecoveryResponse> handle_tsp_recovery(const TspRecoveryForward& forward, Rng& rng);
    Result<Unit> verify_recovery_sms(const RecoverySms& sms, const PhoneNumber& sender);

    const AccountRecord* account(const std::string& user_id) const;

    // Account store: header line "chainpass-store v1", then one record per
    // line with tab-separated user_id, T_u, hex(C), hex(seed), next_index,
    // chain_length, status.
    Result<Unit> persist(const std::filesystem::path& store_path) const;
    Result<Unit> load(const std::filesystem::path& store_path);
    std::string store_text() const;

private:
    std::string server_id_;
    PhoneNumber phone_;
    uint32_t chain_length_;
    uint64_t challenge_ttl_;
    uint64_t now_ = 0;
    std::map<std::string, AccountRecord> accounts_;
    std::map<std::string, OutstandingChallenge> challenges_;
    std::map<std::string, OutstandingRecovery> recoveries_;
};

}  // namespace chainpass
