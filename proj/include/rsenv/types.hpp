#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace rsenv {

using UserId = std::string;
using ItemId = std::string;

/// Scalar context variables attached to an interaction or an outcome.
using ContextMap = std::map<std::string, double>;

/// An ordered slate of distinct item ids drawn from the current candidate set.
struct Action {
    std::vector<ItemId> slate;

    bool operator==(const Action&) const = default;
};

/// Everything observed after an action is applied to the simulated world,
/// before any reward/state abstraction. `user` is the *next* arriving user;
/// `feedback` holds the *current* user's per-slot reaction (missing when the
/// pair is unobserved and the feedback model leaves it so).
struct RawOutcome {
    std::int64_t step_index = 0;
    UserId user;
    Action action_taken;
    std::vector<std::optional<double>> feedback;
    ContextMap context;
    bool terminal = false;

    bool operator==(const RawOutcome&) const = default;
};

/// The agent-visible state: a fixed-length feature vector plus the active
/// user, their candidate items and the episode clock.
struct State {
    std::vector<double> features;
    UserId user;
    std::set<ItemId> candidates;
    std::int64_t clock = 0;

    bool operator==(const State&) const = default;
};

struct StepResult {
    double reward = 0.0;
    State next_state;
    bool done = false;
    RawOutcome raw;
};

}  // namespace rsenv
