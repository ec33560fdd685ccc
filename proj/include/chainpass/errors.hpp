#pragma once

#include <cassert>
#include <string>
#include <variant>

namespace chainpass {

// Every rejection or failure the protocol can produce. Rejections are
// ordinary outcomes (an adversary causes them on purpose), so they travel
// as values, not exceptions.
enum class Err {
    invalid_argument,
    index_out_of_range,
    authentication_failure,
    corrupt_envelope,
    unsupported_frame,
    unknown_kind,
    malformed_frame,
    already_registered,
    protocol_order,
    unknown_server,
    chain_exhausted,
    unknown_account,
    recovery_required,
    spoofed_source,
    stale_registration,
    nonce_mismatch,
    no_challenge,
    credential_mismatch,
    unknown_subscriber,
    sim_disabled,
    io_error,
    corrupt_store,
    config_error,
    runaway_scenario,
};

const char* to_string(Err e);

struct Unit {
    friend bool operator==(Unit, Unit) { return true; }
};

template <typename T>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(Err e) : v_(e) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const {
        assert(ok());
        return std::get<T>(v_);
    }
    T& value() {
        assert(ok());
        return std::get<T>(v_);
    }
    Err error() const {
        assert(!ok());
        return std::get<Err>(v_);
    }

private:
    std::variant<T, Err> v_;
};

}  // namespace chainpass
