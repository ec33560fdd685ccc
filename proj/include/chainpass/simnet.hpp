#pragma once

#include <functional>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "chainpass/rng.hpp"
#include "chainpass/wire.hpp"

namespace chainpass {

// Channel capabilities, from the adversary's point of view:
//   sms        - readable, sender number spoofable, payload modifiable;
//                integrity comes from envelope MACs only
//   secure_3g  - idealized pipe: adversary may drop or delay but cannot
//                read or modify in-flight frames (it may still originate
//                its own frames as an endpoint)
//   kiosk_http - fully adversary-controlled
//   local_link - adversary-observable and modifiable
enum class ChannelKind { sms, secure_3g, kiosk_http, local_link };

const char* to_string(ChannelKind kind);

struct Frame {
    ChannelKind channel = ChannelKind::sms;
    std::string src;
    std::string dst;
    PhoneNumber sender_phone;  // SMS sender metadata; empty elsewhere
    Bytes payload;
    std::string origin = "honest";  // "honest" or "adversary"
    uint64_t id = 0;                // assigned on scheduling
};

struct TranscriptEntry {
    uint64_t tick = 0;
    ChannelKind channel = ChannelKind::sms;
    std::string src;
    std::string dst;
    std::string kind;  // decoded message kind, or "raw"
    Bytes frame;
    std::string outcome;
    std::string origin;
    uint64_t frame_id = 0;
};

struct Transcript {
    std::vector<TranscriptEntry> entries;
    // One event per line: tick, channel, src->dst, kind, hex(frame), outcome.
    std::string format() const;
};

// What a tap decides about a frame passing its hop. Mutations the policy
// made to the frame stand (except on secure_3g, where they are discarded).
struct TapDecision {
    enum class Kind { pass, drop, delay } kind = Kind::pass;
    uint64_t delay_ticks = 0;

    static TapDecision pass() { return {}; }
    static TapDecision drop() { return {Kind::drop, 0}; }
    static TapDecision delay(uint64_t ticks) { return {Kind::delay, ticks}; }
};

class Simnet;

using TapFn = std::function<TapDecision(Frame&, Simnet&)>;
using EndpointFn = std::function<std::string(Simnet&, const Frame&)>;

// Single-threaded deterministic event loop. Events are processed in
// (tick, insertion order) priority; the whole transcript is a pure
// function of the scenario script and the RNG seed.
class Simnet {
public:
    explicit Simnet(uint64_t rng_seed) : rng_(rng_seed) {}

    Rng& rng() { return rng_; }
    uint64_t now() const { return now_; }

    void add_endpoint(const std::string& name, EndpointFn handler);
    bool has_endpoint(const std::string& name) const { return endpoints_.contains(name); }

    // Schedules delivery `delay` ticks from now. Frames sent from inside a
    // handler land strictly after the current event.
    void send(Frame frame, uint64_t delay = 1);
    void inject(Frame frame, uint64_t delay = 1);  // marks origin = adversary

    // Scripted action (user keystrokes, SIM reissue, ...) at an absolute tick.
    void at(uint64_t tick, std::function<void(Simnet&)> action);

    void tap(ChannelKind channel, TapFn policy);

    Result<Transcript> run_until_idle(uint64_t event_budget = 1'000'000);

private:
    struct Event {
        uint64_t tick;
        uint64_t seq;
        bool is_action;
        Frame frame;
        std::function<void(Simnet&)> action;
    };
    struct EventOrder {
        bool operator()(const Event& a, const Event& b) const {
            return a.tick != b.tick ? a.tick > b.tick : a.seq > b.seq;
        }
    };

    void schedule_frame(Frame frame, uint64_t at_tick);
    void log(const Frame& frame, const std::string& outcome);

    Rng rng_;
    uint64_t now_ = 0;
    uint64_t next_seq_ = 0;
    uint64_t next_frame_id_ = 1;
    std::priority_queue<Event, std::vector<Event>, EventOrder> queue_;
    std::map<std::string, EndpointFn> endpoints_;
    std::map<ChannelKind, std::vector<TapFn>> taps_;
    Transcript transcript_;
};

}  // namespace chainpass
