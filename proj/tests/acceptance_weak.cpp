// Negative control: this binary links the deliberately weakened library
// build, whose server hands out a constant challenge nonce. The replay
// scenario must FAIL there — if it passes, the harness cannot actually
// detect protocol breakage.
#include <cstdio>
#include <string>

#include "chainpass/scenarios.hpp"

using namespace chainpass;

int main() {
    Scenario replay;
    bool found = false;
    for (auto& s : builtin_scenarios())
        if (s.name == "replay") {
            replay = s;
            found = true;
        }
    if (!found) {
        std::fprintf(stderr, "missing built-in scenario replay\n");
        return 2;
    }

    Verdict v = run_scenario(replay, 42);
    bool attacker_got_in = false;
    for (const auto& e : v.transcript.entries)
        if (e.origin == "adversary" && is_acceptance_outcome(e.outcome)) attacker_got_in = true;

    // Criterion holds when the weakened build demonstrably breaks: verdict
    // FAIL and an adversary-attributed acceptance in the transcript.
    bool ok = !v.pass && attacker_got_in;
    std::printf("criterion 11 (negative control): %s -- weakened build verdict=%s, %s\n",
                ok ? "pass" : "FAIL", v.pass ? "pass" : "fail",
                attacker_got_in ? "replayed login was accepted"
                                : "replayed login was not accepted");
    return ok ? 0 : 1;
}
