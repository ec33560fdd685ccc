#include "chainpass/simnet.hpp"

#include <sstream>

namespace chainpass {

const char* to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::sms: return "sms";
        case ChannelKind::secure_3g: return "secure_3g";
        case ChannelKind::kiosk_http: return "kiosk_http";
        case ChannelKind::local_link: return "local_link";
    }
    return "?";
}

std::string Transcript::format() const {
    std::ostringstream out;
    for (const auto& e : entries) {
        out << e.tick << '\t' << to_string(e.channel) << '\t' << e.src << "->" << e.dst << '\t'
            << e.kind << '\t' << to_hex(e.frame) << '\t' << e.outcome << '\n';
    }
    return out.str();
}

void Simnet::add_endpoint(const std::string& name, EndpointFn handler) {
    endpoints_[name] = std::move(handler);
}

void Simnet::schedule_frame(Frame frame, uint64_t at_tick) {
    if (frame.id == 0) frame.id = next_frame_id_++;
    queue_.push(Event{at_tick, next_seq_++, false, std::move(frame), {}});
}

void Simnet::send(Frame frame, uint64_t delay) {
    schedule_frame(std::move(frame), now_ + delay);
}

void Simnet::inject(Frame frame, uint64_t delay) {
    frame.origin = "adversary";
    schedule_frame(std::move(frame), now_ + delay);
}

void Simnet::at(uint64_t tick, std::function<void(Simnet&)> action) {
    queue_.push(Event{tick, next_seq_++, true, {}, std::move(action)});
}

void Simnet::tap(ChannelKind channel, TapFn policy) {
    taps_[channel].push_back(std::move(policy));
}

void Simnet::log(const Frame& frame, const std::string& outcome) {
    auto decoded = wire::decode(frame.payload);
    transcript_.entries.push_back(TranscriptEntry{
        now_, frame.channel, frame.src, frame.dst,
        decoded ? wire::kind_name(decoded.value()) : "raw", frame.payload, outcome, frame.origin,
        frame.id});
}

Result<Transcript> Simnet::run_until_idle(uint64_t event_budget) {
    uint64_t processed = 0;
    while (!queue_.empty()) {
        if (++processed > event_budget) return Err::runaway_scenario;
        Event ev = queue_.top();
        queue_.pop();
        now_ = ev.tick;

        if (ev.is_action) {
            ev.action(*this);
            continue;
        }

        Frame frame = std::move(ev.frame);
        bool dropped = false, delayed = false;
        auto tap_it = taps_.find(frame.channel);
        if (tap_it != taps_.end()) {
            for (auto& policy : tap_it->second) {
                TapDecision decision;
                if (frame.channel == ChannelKind::secure_3g) {
                    // Adversary sees that a frame moved but not its contents,
                    // and cannot alter it.
                    Frame redacted = frame;
                    redacted.payload.clear();
                    decision = policy(redacted, *this);
                } else {
                    decision = policy(frame, *this);
                }
                if (decision.kind == TapDecision::Kind::drop) {
                    dropped = true;
                    break;
                }
                if (decision.kind == TapDecision::Kind::delay) {
                    delayed = true;
                    queue_.push(Event{now_ + std::max<uint64_t>(1, decision.delay_ticks),
                                      next_seq_++, false, std::move(frame), {}});
                    break;
                }
            }
        }
        if (dropped) {
            log(frame, "dropped-by-adversary");
            continue;
        }
        if (delayed) continue;

        auto ep = endpoints_.find(frame.dst);
        if (ep == endpoints_.end()) {
            log(frame, "undeliverable");
            continue;
        }
        std::string outcome = ep->second(*this, frame);
        log(frame, outcome);
    }
    return transcript_;
}

}  // namespace chainpass
