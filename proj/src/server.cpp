#include "chainpass/server.hpp"

#include <fstream>
#include <sstream>

namespace chainpass {

const char* to_string(AccountStatus s) {
    switch (s) {
        case AccountStatus::pending: return "pending";
        case AccountStatus::active: return "active";
        case AccountStatus::recovering: return "recovering";
    }
    return "?";
}

static std::optional<AccountStatus> status_from_string(const std::string& s) {
    if (s == "pending") return AccountStatus::pending;
    if (s == "active") return AccountStatus::active;
    if (s == "recovering") return AccountStatus::recovering;
    return std::nullopt;
}

static Nonce fresh_nonce(Rng& rng) {
#ifdef CHAINPASS_WEAK_CONST_NONCE
    // Deliberately broken variant for the negative-control harness test:
    // every challenge nonce is the same value, so replays must get through.
    (void)rng;
    Nonce n;
    n.bytes.fill(0x42);
    return n;
#else
    return Nonce::random(rng);
#endif
}

Result<RegistrationResponse> ServerAgent::handle_tsp_registration(
    const TspRegistrationForward& forward, Rng& rng) {
    auto it = accounts_.find(forward.user_id);
    if (it != accounts_.end() && it->second.status != AccountStatus::pending)
        return Err::already_registered;

    AccountRecord rec;
    rec.user_id = forward.user_id;
    rec.user_phone = forward.user_phone;
    rec.seed = ServerSeed::random(rng);
    rec.next_index = 0;
    rec.chain_length = chain_length_;
    rec.status = AccountStatus::pending;
    rec.registration_key = forward.key;
    accounts_[forward.user_id] = rec;

    return RegistrationResponse{server_id_, rec.seed, phone_, forward.key};
}

Result<Unit> ServerAgent::handle_registration_sms(const RegistrationSms& sms,
                                                  const PhoneNumber& sender) {
    auto it = accounts_.find(sms.user_id);
    if (it == accounts_.end() || it->second.status != AccountStatus::pending ||
        !it->second.registration_key)
        return Err::protocol_order;
    AccountRecord& rec = it->second;

    if (sender != rec.user_phone) return Err::spoofed_source;

    auto plaintext = open(rec.registration_key->bytes, sms.user_id, sms.envelope);
    if (!plaintext) return plaintext.error();

    auto fields = split_length_prefixed(plaintext.value());
    if (!fields || fields->size() != 2 || (*fields)[0].size() != 32 || (*fields)[1].size() != 16)
        return Err::corrupt_envelope;

    ServerSeed embedded_seed;
    std::copy((*fields)[1].begin(), (*fields)[1].end(), embedded_seed.bytes.begin());
    if (!(embedded_seed == rec.seed)) return Err::stale_registration;

    std::copy((*fields)[0].begin(), (*fields)[0].end(), rec.credential.digest.begin());
    rec.next_index = 0;
    rec.status = AccountStatus::active;
    rec.registration_key.reset();
    return Unit{};
}

Result<ServerChallenge> ServerAgent::issue_challenge(const LoginRequest& request, Rng& rng) {
    auto it = accounts_.find(request.user_id);
    if (it == accounts_.end() || it->second.status != AccountStatus::active)
        return Err::unknown_account;
    if (it->second.next_index >= it->second.chain_length) return Err::recovery_required;

    // Newest challenge wins; any earlier one becomes unusable.
    Nonce nonce = fresh_nonce(rng);
    challenges_[request.user_id] = OutstandingChallenge{nonce, now_};
    return ServerChallenge{server_id_, nonce};
}

Result<LoginSuccess> ServerAgent::verify_login_sms(const LoginSms& sms,
                                                   const PhoneNumber& sender) {
    auto acct_it = accounts_.find(sms.user_id);
    if (acct_it == accounts_.end() || acct_it->second.status != AccountStatus::active)
        return Err::unknown_account;
    AccountRecord& rec = acct_it->second;

    auto chal_it = challenges_.find(sms.user_id);
    if (chal_it == challenges_.end() || now_ > chal_it->second.issued_at + challenge_ttl_)
        return Err::no_challenge;

    if (sender != rec.user_phone) return Err::spoofed_source;

    // Never stored: the OTP is recomputed from the credential on every login.
    auto otp = otp_at_index(rec.credential, rec.chain_length, rec.next_index);
    if (!otp) return otp.error();

    auto plaintext = open(otp.value().key(), sms.user_id, sms.envelope);
    if (!plaintext) return plaintext.error();

    auto fields = split_length_prefixed(plaintext.value());
    if (!fields || fields->size() != 2 || (*fields)[0].size() != 16 || (*fields)[1].size() != 16)
        return Err::corrupt_envelope;

    Nonce device_nonce, echoed_nonce;
    std::copy((*fields)[0].begin(), (*fields)[0].end(), device_nonce.bytes.begin());
    std::copy((*fields)[1].begin(), (*fields)[1].end(), echoed_nonce.bytes.begin());
    if (!(echoed_nonce == chal_it->second.server_nonce)) return Err::nonce_mismatch;

    rec.next_index += 1;
    challenges_.erase(chal_it);
    return LoginSuccess{success_digest(device_nonce, otp.value())};
}

Result<RecoveryResponse> ServerAgent::handle_tsp_recovery(const TspRecoveryForward& forward,
                                                          Rng& rng) {
    auto it = accounts_.find(forward.user_id);
    if (it == accounts_.end() || it->second.status == AccountStatus::pending)
        return Err::unknown_account;
    AccountRecord& rec = it->second;

    OutstandingRecovery pending;
    pending.server_nonce = fresh_nonce(rng);
    if (rec.next_index + 1 >= rec.chain_length) {
        // Chain nearly spent: offer a fresh seed, restarting at index 0. The
        // recovery envelope itself is still keyed with the old chain's next
        // unused OTP so the reseed is authenticated.
        pending.reseed = true;
        pending.offered_seed = ServerSeed::random(rng);
        pending.offered_index = 0;
        pending.key_index = rec.next_index;
    } else {
        pending.reseed = false;
        pending.offered_seed = rec.seed;
        pending.offered_index = rec.next_index;
        pending.key_index = rec.next_index;
    }
    recoveries_[forward.user_id] = pending;
    rec.status = AccountStatus::recovering;

    return RecoveryResponse{server_id_, pending.offered_seed, phone_, pending.offered_index,
                            pending.server_nonce};
}

Result<Unit> ServerAgent::verify_recovery_sms(const RecoverySms& sms, const PhoneNumber& sender) {
    auto acct_it = accounts_.find(sms.user_id);
    if (acct_it == accounts_.end()) return Err::unknown_account;
    AccountRecord& rec = acct_it->second;

    auto rcv_it = recoveries_.find(sms.user_id);
    if (rec.status != AccountStatus::recovering || rcv_it == recoveries_.end())
        return Err::no_challenge;
    const OutstandingRecovery& pending = rcv_it->second;

    if (sender != rec.user_phone) return Err::spoofed_source;

    auto otp = otp_at_index(rec.credential, rec.chain_length, pending.key_index);
    if (!otp) return otp.error();

    auto plaintext = open(otp.value().key(), sms.user_id, sms.envelope);
    if (!plaintext) return plaintext.error();

    auto fields = split_length_prefixed(plaintext.value());
    if (!fields || fields->size() != 2 || (*fields)[0].size() != 32 || (*fields)[1].size() != 16)
        return Err::corrupt_envelope;

    Nonce echoed_nonce;
    std::copy((*fields)[1].begin(), (*fields)[1].end(), echoed_nonce.bytes.begin());
    if (!(echoed_nonce == pending.server_nonce)) return Err::nonce_mismatch;

    Credential received;
    std::copy((*fields)[0].begin(), (*fields)[0].end(), received.digest.begin());
    if (pending.reseed) {
        // New chain root: nothing stored to compare against, the old-chain
        // MAC plus the nonce is the whole check. Known protocol gap.
        rec.credential = received;
        rec.seed = pending.offered_seed;
    } else if (!(received == rec.credential)) {
        return Err::credential_mismatch;
    }

    rec.next_index = pending.offered_index + 1;
    rec.status = AccountStatus::active;
    recoveries_.erase(rcv_it);
    return Unit{};
}

const AccountRecord* ServerAgent::account(const std::string& user_id) const {
    auto it = accounts_.find(user_id);
    return it == accounts_.end() ? nullptr : &it->second;
}

std::string ServerAgent::store_text() const {
    std::ostringstream out;
    out << "chainpass-store v1\n";
    for (const auto& [id, rec] : accounts_) {
        out << rec.user_id << '\t' << rec.user_phone.digits() << '\t'
            << to_hex(rec.credential.digest) << '\t' << to_hex(rec.seed.bytes) << '\t'
            << rec.next_index << '\t' << rec.chain_length << '\t' << to_string(rec.status)
            << '\n';
    }
    return out.str();
}

Result<Unit> ServerAgent::persist(const std::filesystem::path& store_path) const {
    std::ofstream out(store_path, std::ios::binary | std::ios::trunc);
    if (!out) return Err::io_error;
    out << store_text();
    return out.good() ? Result<Unit>(Unit{}) : Result<Unit>(Err::io_error);
}

Result<Unit> ServerAgent::load(const std::filesystem::path& store_path) {
    std::ifstream in(store_path, std::ios::binary);
    if (!in) return Err::io_error;

    std::string line;
    if (!std::getline(in, line) || line != "chainpass-store v1") return Err::corrupt_store;

    std::map<std::string, AccountRecord> loaded;
    while (std::getline(in, line)) {
        if (line.empty()) return Err::corrupt_store;
        std::vector<std::string> cols;
        std::istringstream ls(line);
        std::string col;
        while (std::getline(ls, col, '\t')) cols.push_back(col);
        if (cols.size() != 7) return Err::corrupt_store;

        AccountRecord rec;
        rec.user_id = cols[0];
        auto phone = PhoneNumber::parse(cols[1]);
        auto cred = from_hex(cols[2]);
        auto seed = from_hex(cols[3]);
        auto status = status_from_string(cols[6]);
        if (!phone || !cred || cred->size() != 32 || !seed || seed->size() != 16 || !status)
            return Err::corrupt_store;
        rec.user_phone = phone.value();
        std::copy(cred->begin(), cred->end(), rec.credential.digest.begin());
        std::copy(seed->begin(), seed->end(), rec.seed.bytes.begin());
        try {
            rec.next_index = static_cast<uint32_t>(std::stoul(cols[4]));
            rec.chain_length = static_cast<uint32_t>(std::stoul(cols[5]));
        } catch (const std::exception&) {
            return Err::corrupt_store;
        }
        if (rec.next_index > rec.chain_length) return Err::corrupt_store;
        rec.status = status.value();
        loaded[rec.user_id] = rec;
    }
    accounts_ = std::move(loaded);
    challenges_.clear();
    recoveries_.clear();
    return Unit{};
}

}  // namespace chainpass
