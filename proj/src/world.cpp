#include <stdexcept>

#include "chainpass/scenarios.hpp"

namespace chainpass {

namespace {

std::string rejected(Err e) { return std::string("rejected:") + to_string(e); }

Result<LongTermPassword> password_of(const std::string& s) {
    return LongTermPassword::from_string(s);
}

}  // namespace

World::World(WorldConfig config) : config_(config), net_(config.seed) {
    net_.add_endpoint("tsp",
                      [this](Simnet& net, const Frame& f) { return handle_tsp_frame(net, f); });
    net_.add_endpoint("kiosk",
                      [this](Simnet& net, const Frame& f) { return handle_kiosk_frame(net, f); });
}

void World::add_server(const std::string& server_id, const std::string& phone_digits) {
    auto number = PhoneNumber::parse(phone_digits);
    if (!number) throw std::invalid_argument("bad server phone number");
    servers_[server_id] =
        std::make_unique<ServerAgent>(server_id, number.value(), config_.chain_length);
    number_to_endpoint_[phone_digits] = server_endpoint(server_id);
    tsp_.register_server(server_id);
    net_.add_endpoint(server_endpoint(server_id), [this, server_id](Simnet& net, const Frame& f) {
        return handle_server_frame(server_id, net, f);
    });
}

void World::add_user(const std::string& user_id, const std::string& sim_id,
                     const std::string& phone_digits, const std::string& password) {
    auto number = PhoneNumber::parse(phone_digits);
    if (!number) throw std::invalid_argument("bad user phone number");
    if (!password_of(password)) throw std::invalid_argument("bad password");
    users_[user_id] = UserInfo{sim_id, number.value(), password,
                               std::make_unique<PhoneAgent>(user_id, config_.chain_length)};
    number_to_endpoint_[phone_digits] = phone_endpoint(user_id);
    tsp_.enroll_sim(sim_id, number.value());
    net_.add_endpoint(phone_endpoint(user_id), [this, user_id](Simnet& net, const Frame& f) {
        return handle_phone_frame(user_id, net, f);
    });
}

std::string World::endpoint_for_number(const PhoneNumber& number) const {
    auto it = number_to_endpoint_.find(number.digits());
    return it == number_to_endpoint_.end() ? "sms:" + number.digits() : it->second;
}

std::string World::handle_phone_frame(const std::string& user_id, Simnet& net,
                                      const Frame& frame) {
    UserInfo& user = users_.at(user_id);
    auto decoded = wire::decode(frame.payload);
    if (!decoded) return rejected(decoded.error());
    auto password = password_of(user.password);

    return std::visit(
        [&](const auto& msg) -> std::string {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, RegistrationResponse>) {
                auto sms = user.agent->complete_registration(msg, password.value(), net.rng());
                if (!sms) return rejected(sms.error());
                net.send(Frame{ChannelKind::sms, phone_endpoint(user_id),
                               endpoint_for_number(msg.server_phone), user.number,
                               wire::encode(Message{sms.value()})});
                return "registration-sms-sent";
            } else if constexpr (std::is_same_v<T, ServerChallenge>) {
                auto sms = user.agent->build_login_sms(msg, password.value(), net.rng());
                if (!sms) return rejected(sms.error());
                const DeviceRecord* rec = user.agent->record(msg.server_id);
                net.send(Frame{ChannelKind::sms, phone_endpoint(user_id),
                               endpoint_for_number(rec->server_phone), user.number,
                               wire::encode(Message{sms.value()})});
                return "login-sms-sent";
            } else if constexpr (std::is_same_v<T, LoginSuccess>) {
                auto outcome = user.agent->verify_success(msg);
                if (!outcome) return rejected(outcome.error());
                return outcome.value() == LoginOutcome::accepted ? "success-verified"
                                                                 : "rejected:bad-success-digest";
            } else if constexpr (std::is_same_v<T, RecoveryResponse>) {
                auto sms = user.agent->complete_recovery(msg, password.value(), net.rng());
                if (!sms) return rejected(sms.error());
                net.send(Frame{ChannelKind::sms, phone_endpoint(user_id),
                               endpoint_for_number(msg.server_phone), user.number,
                               wire::encode(Message{sms.value()})});
                return "recovery-sms-sent";
            } else {
                return "rejected:unexpected-message";
            }
        },
        decoded.value());
}

std::string World::handle_server_frame(const std::string& server_id, Simnet& net,
                                       const Frame& frame) {
    ServerAgent& server = *servers_.at(server_id);
    server.set_clock(net.now());
    auto decoded = wire::decode(frame.payload);
    if (!decoded) return rejected(decoded.error());

    return std::visit(
        [&](const auto& msg) -> std::string {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, TspRegistrationForward>) {
                auto response = server.handle_tsp_registration(msg, net.rng());
                if (!response) return rejected(response.error());
                net.send(Frame{ChannelKind::secure_3g, server_endpoint(server_id), "tsp",
                               PhoneNumber{}, wire::encode(Message{response.value()})});
                return "registration-response-issued";
            } else if constexpr (std::is_same_v<T, RegistrationSms>) {
                auto outcome = server.handle_registration_sms(msg, frame.sender_phone);
                if (!outcome) return rejected(outcome.error());
                return "registration-complete";
            } else if constexpr (std::is_same_v<T, LoginRequest>) {
                auto challenge = server.issue_challenge(msg, net.rng());
                if (!challenge) return rejected(challenge.error());
                net.send(Frame{ChannelKind::kiosk_http, server_endpoint(server_id), "kiosk",
                               PhoneNumber{}, wire::encode(Message{challenge.value()})});
                return "challenge-issued";
            } else if constexpr (std::is_same_v<T, LoginSms>) {
                auto success = server.verify_login_sms(msg, frame.sender_phone);
                if (!success) return rejected(success.error());
                net.send(Frame{ChannelKind::secure_3g, server_endpoint(server_id),
                               phone_endpoint(msg.user_id), PhoneNumber{},
                               wire::encode(Message{success.value()})});
                return "login-accepted;next_index=" +
                       std::to_string(server.account(msg.user_id)->next_index);
            } else if constexpr (std::is_same_v<T, TspRecoveryForward>) {
                auto response = server.handle_tsp_recovery(msg, net.rng());
                if (!response) return rejected(response.error());
                net.send(Frame{ChannelKind::secure_3g, server_endpoint(server_id), "tsp",
                               PhoneNumber{}, wire::encode(Message{response.value()})});
                return "recovery-response-issued";
            } else if constexpr (std::is_same_v<T, RecoverySms>) {
                auto outcome = server.verify_recovery_sms(msg, frame.sender_phone);
                if (!outcome) return rejected(outcome.error());
                return "recovery-accepted;next_index=" +
                       std::to_string(server.account(msg.user_id)->next_index);
            } else {
                return "rejected:unexpected-message";
            }
        },
        decoded.value());
}

std::string World::handle_tsp_frame(Simnet& net, const Frame& frame) {
    auto decoded = wire::decode(frame.payload);
    if (!decoded) return rejected(decoded.error());

    // Requests arrive from phones over 3G; the originating user's SIM is
    // whatever card their phone currently runs.
    auto sim_of_src = [&](const std::string& src) -> const std::string* {
        constexpr std::string_view kPrefix = "phone:";
        if (src.rfind(kPrefix, 0) != 0) return nullptr;
        auto it = users_.find(src.substr(kPrefix.size()));
        return it == users_.end() ? nullptr : &it->second.sim_id;
    };

    return std::visit(
        [&](const auto& msg) -> std::string {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, RegistrationRequest>) {
                const std::string* sim = sim_of_src(frame.src);
                if (!sim) return rejected(Err::unknown_subscriber);
                auto fwd = tsp_.forward_registration(msg, *sim, net.rng());
                if (!fwd) return rejected(fwd.error());
                tsp_pending_registrations_[msg.server_id].push_back(msg.user_id);
                net.send(Frame{ChannelKind::secure_3g, "tsp", server_endpoint(msg.server_id),
                               PhoneNumber{}, wire::encode(Message{fwd.value()})});
                return "forwarded-registration";
            } else if constexpr (std::is_same_v<T, RecoveryRequest>) {
                const std::string* sim = sim_of_src(frame.src);
                if (!sim) return rejected(Err::unknown_subscriber);
                auto fwd = tsp_.forward_recovery(msg, *sim);
                if (!fwd) return rejected(fwd.error());
                tsp_pending_recoveries_[msg.server_id].push_back(msg.user_id);
                net.send(Frame{ChannelKind::secure_3g, "tsp", server_endpoint(msg.server_id),
                               PhoneNumber{}, wire::encode(Message{fwd.value()})});
                return "forwarded-recovery";
            } else if constexpr (std::is_same_v<T, RegistrationResponse>) {
                auto& queue = tsp_pending_registrations_[msg.server_id];
                if (queue.empty()) return rejected(Err::protocol_order);
                std::string user_id = queue.front();
                queue.pop_front();
                net.send(Frame{ChannelKind::secure_3g, "tsp", phone_endpoint(user_id),
                               PhoneNumber{}, frame.payload});
                return "relayed-registration-response";
            } else if constexpr (std::is_same_v<T, RecoveryResponse>) {
                auto& queue = tsp_pending_recoveries_[msg.server_id];
                if (queue.empty()) return rejected(Err::protocol_order);
                std::string user_id = queue.front();
                queue.pop_front();
                net.send(Frame{ChannelKind::secure_3g, "tsp", phone_endpoint(user_id),
                               PhoneNumber{}, frame.payload});
                return "relayed-recovery-response";
            } else {
                return "rejected:unexpected-message";
            }
        },
        decoded.value());
}

std::string World::handle_kiosk_frame(Simnet& net, const Frame& frame) {
    auto decoded = wire::decode(frame.payload);
    if (!decoded) return rejected(decoded.error());

    if (std::holds_alternative<LoginRequest>(decoded.value())) {
        if (kiosk_target_.empty()) return rejected(Err::protocol_order);
        net.send(Frame{ChannelKind::kiosk_http, "kiosk", server_endpoint(kiosk_target_),
                       PhoneNumber{}, frame.payload});
        return "forwarded-to-server";
    }
    if (std::holds_alternative<ServerChallenge>(decoded.value())) {
        if (kiosk_user_.empty()) return rejected(Err::protocol_order);
        net.send(Frame{ChannelKind::local_link, "kiosk", phone_endpoint(kiosk_user_),
                       PhoneNumber{}, frame.payload});
        return "forwarded-to-phone";
    }
    return "rejected:unexpected-message";
}

void World::do_register(uint64_t tick, const std::string& user_id, const std::string& server_id) {
    net_.at(tick, [this, user_id, server_id](Simnet& net) {
        auto request = users_.at(user_id).agent->begin_registration(server_id);
        if (!request) return;
        net.send(Frame{ChannelKind::secure_3g, phone_endpoint(user_id), "tsp", PhoneNumber{},
                       wire::encode(Message{request.value()})});
    });
}

void World::do_login(uint64_t tick, const std::string& user_id, const std::string& server_id) {
    net_.at(tick, [this, user_id, server_id](Simnet& net) {
        // The user walks up to the kiosk and types only their account id.
        kiosk_user_ = user_id;
        kiosk_target_ = server_id;
        net.send(Frame{ChannelKind::kiosk_http, "user:" + user_id, "kiosk", PhoneNumber{},
                       wire::encode(Message{LoginRequest{user_id}})});
    });
}

void World::do_recover(uint64_t tick, const std::string& user_id, const std::string& server_id) {
    net_.at(tick, [this, user_id, server_id](Simnet& net) {
        RecoveryRequest request = users_.at(user_id).agent->begin_recovery(server_id);
        net.send(Frame{ChannelKind::secure_3g, phone_endpoint(user_id), "tsp", PhoneNumber{},
                       wire::encode(Message{request})});
    });
}

void World::do_disable_sim(uint64_t tick, const std::string& user_id) {
    net_.at(tick, [this, user_id](Simnet&) { tsp_.disable_sim(users_.at(user_id).sim_id); });
}

void World::do_reissue_sim(uint64_t tick, const std::string& user_id,
                           const std::string& new_sim_id) {
    net_.at(tick, [this, user_id, new_sim_id](Simnet&) {
        UserInfo& user = users_.at(user_id);
        tsp_.reissue_sim(user.sim_id, new_sim_id);
        user.sim_id = new_sim_id;
    });
}

void World::do_replace_phone(uint64_t tick, const std::string& user_id) {
    net_.at(tick, [this, user_id](Simnet&) {
        users_.at(user_id).agent = std::make_unique<PhoneAgent>(user_id, config_.chain_length);
    });
}

Result<Transcript> World::run(uint64_t event_budget) { return net_.run_until_idle(event_budget); }

ServerAgent& World::server(const std::string& server_id) { return *servers_.at(server_id); }
PhoneAgent& World::phone(const std::string& user_id) { return *users_.at(user_id).agent; }

const std::string& World::user_password(const std::string& user_id) const {
    return users_.at(user_id).password;
}

const PhoneNumber& World::user_number(const std::string& user_id) const {
    return users_.at(user_id).number;
}

}  // namespace chainpass
