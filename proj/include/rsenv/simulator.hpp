#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rsenv/interaction_log.hpp"
#include "rsenv/rng.hpp"
#include "rsenv/types.hpp"

namespace rsenv {

/// Who arrives next.
///   SequentialReplay   - users in exact log timestamp order
///   EmpiricalFrequency - users sampled proportionally to their event counts
///   UniformRandom      - users sampled uniformly
enum class ArrivalKind { SequentialReplay, EmpiricalFrequency, UniformRandom };

/// What feedback an unobserved (user, item) pair elicits. Observed pairs
/// always return the logged value (last by timestamp).
struct FeedbackModel {
    enum class Kind { LookupSkip, LookupDefault, ImputeMAR };
    enum class ImputeLevel { Global, User, Item };

    Kind kind = Kind::LookupSkip;
    double default_value = 0.0;                 // LookupDefault
    ImputeLevel level = ImputeLevel::Global;    // ImputeMAR

    /// Imputation means, frozen at simulator build time. Carried in the
    /// manifest so reproduction never refits.
    struct ImputeStats {
        double global_mean = 0.0;
        std::map<UserId, double> user_means;
        std::map<ItemId, double> item_means;

        bool operator==(const ImputeStats&) const = default;
    };
    std::optional<ImputeStats> frozen;

    bool operator==(const FeedbackModel&) const = default;
};

enum class CandidatePolicy { AllItems, ExcludeConsumed };

/// The explicit assumption ledger that augments Observed Data into a
/// runnable world. All fields appear explicitly in serialized form.
struct DesignAssumptions {
    ArrivalKind arrival = ArrivalKind::SequentialReplay;
    FeedbackModel feedback;
    CandidatePolicy candidate_policy = CandidatePolicy::AllItems;
    std::int64_t episode_length_max = 1;

    bool operator==(const DesignAssumptions&) const = default;
};

/// Dataset-backed world dynamics: which user arrives next and what feedback
/// a slate elicits. Consumes randomness only from the arrival stream handed
/// to reset(), so the arrival sequence is independent of every other
/// component's randomness. Copyable: a copy is an independent replica.
class Simulator {
public:
    Simulator(std::shared_ptr<const InteractionLog> log, DesignAssumptions assumptions);

    /// Returns to step 0 and draws the first arrival from the given stream.
    void reset(Xoshiro256StarStar arrival_stream);

    /// Applies one action for the current user: looks up per-slot feedback,
    /// then advances to the next arrival. The returned outcome carries the
    /// next user (or the current one when the episode just terminated).
    RawOutcome transition(const Action& action);

    const UserId& current_user() const { return current_user_; }
    const ContextMap& current_context() const { return current_context_; }
    std::set<ItemId> current_candidates() const { return candidates_for(current_user_); }
    bool terminal() const { return terminal_; }

    const InteractionLog& log() const { return *log_; }
    const DesignAssumptions& assumptions() const { return assumptions_; }

    /// Context keys this simulator can ever emit (those present in the log).
    std::set<std::string> context_keys() const { return log_->context_keys(); }

    /// Assumptions with imputation statistics filled in, for serialization.
    DesignAssumptions frozen_assumptions() const;

private:
    std::set<ItemId> candidates_for(const UserId& user) const;
    bool eligible(const UserId& user) const { return !candidates_for(user).empty(); }
    /// Draws the next arrival; returns false when no eligible user remains.
    bool draw_arrival();

    std::shared_ptr<const InteractionLog> log_;
    DesignAssumptions assumptions_;

    // Frozen at build time.
    std::map<std::pair<UserId, ItemId>, double> lookup_;  // last-by-timestamp
    std::vector<UserId> users_sorted_;
    std::vector<std::int64_t> user_weights_;              // event counts, aligned with users_sorted_
    std::map<UserId, std::set<ItemId>> consumed_in_log_;

    // Episode state.
    Xoshiro256StarStar arrival_rng_;
    std::size_t replay_cursor_ = 0;
    std::int64_t steps_taken_ = 0;
    UserId current_user_;
    ContextMap current_context_;
    std::map<UserId, std::set<ItemId>> shown_this_episode_;
    bool terminal_ = true;
    bool has_reset_ = false;
};

Simulator build_simulator(std::shared_ptr<const InteractionLog> log,
                          const DesignAssumptions& assumptions);

}  // namespace rsenv
