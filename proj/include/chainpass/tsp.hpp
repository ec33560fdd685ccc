#pragma once

#include <map>
#include <set>
#include <string>

#include "chainpass/crypto.hpp"
#include "chainpass/wire.hpp"

namespace chainpass {

// Telecommunication service provider: SIM directory plus registration /
// recovery forwarding. Generates each registration key, forwards it, keeps
// no copy.
class TspAgent {
public:
    struct SimEntry {
        PhoneNumber number;
        bool enabled = true;
    };

    void enroll_sim(const std::string& sim_id, PhoneNumber number) {
        sims_[sim_id] = SimEntry{std::move(number), true};
    }
    void register_server(const std::string& server_id) { servers_.insert(server_id); }

    Result<TspRegistrationForward> forward_registration(const RegistrationRequest& request,
                                                        const std::string& sim_id, Rng& rng);
    Result<TspRecoveryForward> forward_recovery(const RecoveryRequest& request,
                                                const std::string& sim_id);

    Result<Unit> disable_sim(const std::string& sim_id);
    Result<Unit> reissue_sim(const std::string& old_sim_id, const std::string& new_sim_id);

    const SimEntry* sim(const std::string& sim_id) const;

    Bytes state_snapshot() const;

private:
    Result<PhoneNumber> lookup(const std::string& sim_id) const;

    std::map<std::string, SimEntry> sims_;
    std::set<std::string> servers_;
};

}  // namespace chainpass
