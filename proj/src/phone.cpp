#include "chainpass/phone.hpp"

namespace chainpass {

Result<RegistrationRequest> PhoneAgent::begin_registration(const std::string& server_id) {
    if (records_.contains(server_id)) return Err::already_registered;
    pending_registrations_.insert(server_id);
    return RegistrationRequest{user_id_, server_id};
}

Result<RegistrationSms> PhoneAgent::complete_registration(const RegistrationResponse& response,
                                                          const LongTermPassword& password,
                                                          Rng& rng) {
    if (!pending_registrations_.contains(response.server_id)) return Err::protocol_order;

    auto credential = derive_credential(password, response.server_id, response.seed);
    if (!credential) return credential.error();

    // Plaintext (C || seed); the credential is never retained locally.
    Bytes plaintext = length_prefixed_concat(
        {BytesView(credential.value().digest), BytesView(response.seed.bytes)});
    auto envelope = seal(response.key.bytes, user_id_, plaintext, rng);
    if (!envelope) return envelope.error();

    records_[response.server_id] = DeviceRecord{response.server_id, response.server_phone,
                                                response.seed, 0, chain_length_};
    pending_registrations_.erase(response.server_id);
    return RegistrationSms{user_id_, envelope.value()};
}

Result<LoginSms> PhoneAgent::build_login_sms(const ServerChallenge& challenge,
                                             const LongTermPassword& password, Rng& rng) {
    auto it = records_.find(challenge.server_id);
    if (it == records_.end()) return Err::unknown_server;
    DeviceRecord& rec = it->second;
    if (rec.next_index >= rec.chain_length) return Err::chain_exhausted;

    auto credential = derive_credential(password, rec.server_id, rec.seed);
    if (!credential) return credential.error();
    auto otp = otp_at_index(credential.value(), rec.chain_length, rec.next_index);
    if (!otp) return otp.error();

    Nonce device_nonce = Nonce::random(rng);
    Bytes plaintext = length_prefixed_concat(
        {BytesView(device_nonce.bytes), BytesView(challenge.server_nonce.bytes)});
    auto envelope = seal(otp.value().key(), user_id_, plaintext, rng);
    if (!envelope) return envelope.error();

    // Index is incremented only once the server's success digest verifies.
    pending_login_ =
        PendingLogin{challenge.server_id, challenge.server_nonce, device_nonce, otp.value()};
    return LoginSms{user_id_, envelope.value()};
}

Result<LoginOutcome> PhoneAgent::verify_success(const LoginSuccess& message) {
    if (!pending_login_) return Err::protocol_order;
    PendingLogin pending = std::move(*pending_login_);
    pending_login_.reset();

    if (message.digest != success_digest(pending.device_nonce, pending.otp))
        return LoginOutcome::rejected;

    records_.at(pending.server_id).next_index += 1;
    return LoginOutcome::accepted;
}

RecoveryRequest PhoneAgent::begin_recovery(const std::string& server_id) {
    pending_recoveries_.insert(server_id);
    return RecoveryRequest{user_id_, server_id};
}

Result<RecoverySms> PhoneAgent::complete_recovery(const RecoveryResponse& response,
                                                  const LongTermPassword& password, Rng& rng) {
    if (!pending_recoveries_.contains(response.server_id)) return Err::protocol_order;

    // Credential of the chain named by the response seed; on a reseed this
    // is the new chain's root and is what the server will store.
    auto credential = derive_credential(password, response.server_id, response.seed);
    if (!credential) return credential.error();

    // Envelope key: normally the response chain at the server's next unused
    // index. If we still hold a record under a different (older) seed the
    // server is reseeding and expects proof against the old chain at our
    // current index.
    OneTimePassword key_otp;
    auto it = records_.find(response.server_id);
    if (it != records_.end() && !(it->second.seed == response.seed)) {
        auto old_credential = derive_credential(password, response.server_id, it->second.seed);
        if (!old_credential) return old_credential.error();
        auto otp = otp_at_index(old_credential.value(), it->second.chain_length,
                                it->second.next_index);
        if (!otp) return otp.error();
        key_otp = otp.value();
    } else {
        auto otp = otp_at_index(credential.value(), chain_length_, response.next_index);
        if (!otp) return otp.error();
        key_otp = otp.value();
    }

    Bytes plaintext = length_prefixed_concat(
        {BytesView(credential.value().digest), BytesView(response.server_nonce.bytes)});
    auto envelope = seal(key_otp.key(), user_id_, plaintext, rng);
    if (!envelope) return envelope.error();

    // Recovery consumes one index; the next login uses response index + 1.
    records_[response.server_id] = DeviceRecord{response.server_id, response.server_phone,
                                                response.seed, response.next_index + 1,
                                                chain_length_};
    pending_recoveries_.erase(response.server_id);
    return RecoverySms{user_id_, envelope.value()};
}

const DeviceRecord* PhoneAgent::record(const std::string& server_id) const {
    auto it = records_.find(server_id);
    return it == records_.end() ? nullptr : &it->second;
}

Bytes PhoneAgent::state_snapshot() const {
    Bytes out = to_bytes(user_id_);
    for (const auto& [id, rec] : records_) {
        append_length_prefixed(out, BytesView(to_bytes(rec.server_id)));
        append_length_prefixed(out, BytesView(to_bytes(rec.server_phone.digits())));
        append_length_prefixed(out, BytesView(rec.seed.bytes));
        append_be32(out, rec.next_index);
        append_be32(out, rec.chain_length);
    }
    for (const auto& id : pending_registrations_)
        append_length_prefixed(out, BytesView(to_bytes(id)));
    for (const auto& id : pending_recoveries_)
        append_length_prefixed(out, BytesView(to_bytes(id)));
    if (pending_login_) {
        append_length_prefixed(out, BytesView(to_bytes(pending_login_->server_id)));
        append_length_prefixed(out, BytesView(pending_login_->server_nonce.bytes));
        append_length_prefixed(out, BytesView(pending_login_->device_nonce.bytes));
        append_length_prefixed(out, BytesView(pending_login_->otp.digest));
    }
    return out;
}

}  // namespace chainpass
