#include "chainpass/tsp.hpp"

namespace chainpass {

Result<PhoneNumber> TspAgent::lookup(const std::string& sim_id) const {
    auto it = sims_.find(sim_id);
    if (it == sims_.end()) return Err::unknown_subscriber;
    if (!it->second.enabled) return Err::sim_disabled;
    return it->second.number;
}

Result<TspRegistrationForward> TspAgent::forward_registration(const RegistrationRequest& request,
                                                              const std::string& sim_id,
                                                              Rng& rng) {
    auto number = lookup(sim_id);
    if (!number) return number.error();
    if (!servers_.contains(request.server_id)) return Err::unknown_server;
    // The key only passes through; it is not kept here.
    return TspRegistrationForward{request.user_id, number.value(), SessionKey::random(rng)};
}

Result<TspRecoveryForward> TspAgent::forward_recovery(const RecoveryRequest& request,
                                                      const std::string& sim_id) {
    auto number = lookup(sim_id);
    if (!number) return number.error();
    if (!servers_.contains(request.server_id)) return Err::unknown_server;
    return TspRecoveryForward{request.user_id, number.value()};
}

Result<Unit> TspAgent::disable_sim(const std::string& sim_id) {
    auto it = sims_.find(sim_id);
    if (it == sims_.end()) return Err::unknown_subscriber;
    it->second.enabled = false;
    return Unit{};
}

Result<Unit> TspAgent::reissue_sim(const std::string& old_sim_id, const std::string& new_sim_id) {
    auto it = sims_.find(old_sim_id);
    if (it == sims_.end()) return Err::unknown_subscriber;
    PhoneNumber number = it->second.number;
    it->second.enabled = false;
    sims_[new_sim_id] = SimEntry{number, true};  // same number, new card
    return Unit{};
}

const TspAgent::SimEntry* TspAgent::sim(const std::string& sim_id) const {
    auto it = sims_.find(sim_id);
    return it == sims_.end() ? nullptr : &it->second;
}

Bytes TspAgent::state_snapshot() const {
    Bytes out;
    for (const auto& [id, entry] : sims_) {
        append_length_prefixed(out, BytesView(to_bytes(id)));
        append_length_prefixed(out, BytesView(to_bytes(entry.number.digits())));
        out.push_back(entry.enabled ? 1 : 0);
    }
    for (const auto& s : servers_) append_length_prefixed(out, BytesView(to_bytes(s)));
    return out;
}

}  // namespace chainpass
