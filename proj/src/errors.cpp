#include "chainpass/errors.hpp"

namespace chainpass {

const char* to_string(Err e) {
    switch (e) {
        case Err::invalid_argument: return "invalid-argument";
        case Err::index_out_of_range: return "index-out-of-range";
        case Err::authentication_failure: return "authentication-failure";
        case Err::corrupt_envelope: return "corrupt-envelope";
        case Err::unsupported_frame: return "unsupported-frame";
        case Err::unknown_kind: return "unknown-kind";
        case Err::malformed_frame: return "malformed-frame";
        case Err::already_registered: return "already-registered";
        case Err::protocol_order: return "protocol-order";
        case Err::unknown_server: return "unknown-server";
        case Err::chain_exhausted: return "chain-exhausted";
        case Err::unknown_account: return "unknown-account";
        case Err::recovery_required: return "recovery-required";
        case Err::spoofed_source: return "spoofed-source";
        case Err::stale_registration: return "stale-registration";
        case Err::nonce_mismatch: return "nonce-mismatch";
        case Err::no_challenge: return "no-challenge";
        case Err::credential_mismatch: return "credential-mismatch";
        case Err::unknown_subscriber: return "unknown-subscriber";
        case Err::sim_disabled: return "sim-disabled";
        case Err::io_error: return "io-error";
        case Err::corrupt_store: return "corrupt-store";
        case Err::config_error: return "config-error";
        case Err::runaway_scenario: return "runaway-scenario";
    }
    return "unknown-error";
}

}  // namespace chainpass
