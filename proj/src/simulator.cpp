#include "rsenv/simulator.hpp"

#include <algorithm>
#include <numeric>

#include "rsenv/errors.hpp"

namespace rsenv {

Simulator::Simulator(std::shared_ptr<const InteractionLog> log, DesignAssumptions assumptions)
    : log_(std::move(log)), assumptions_(std::move(assumptions)) {
    if (!log_ || log_->empty()) throw EmptyLog("simulator requires a non-empty interaction log");
    if (assumptions_.episode_length_max < 1)
        throw InvalidSpec("episode_length_max must be >= 1");

    for (const auto& e : log_->events) {
        lookup_[{e.user, e.item}] = e.feedback;  // events sorted: last write wins
        consumed_in_log_[e.user].insert(e.item);
    }
    users_sorted_.assign(log_->users.begin(), log_->users.end());
    std::map<UserId, std::int64_t> counts;
    for (const auto& e : log_->events) ++counts[e.user];
    user_weights_.reserve(users_sorted_.size());
    for (const auto& u : users_sorted_) user_weights_.push_back(counts[u]);

    // Freeze imputation means now so they never drift with later data edits.
    if (assumptions_.feedback.kind == FeedbackModel::Kind::ImputeMAR &&
        !assumptions_.feedback.frozen) {
        FeedbackModel::ImputeStats stats;
        double total = 0.0;
        std::map<UserId, std::pair<double, std::size_t>> by_user;
        std::map<ItemId, std::pair<double, std::size_t>> by_item;
        for (const auto& e : log_->events) {
            total += e.feedback;
            auto& u = by_user[e.user];
            u.first += e.feedback;
            ++u.second;
            auto& i = by_item[e.item];
            i.first += e.feedback;
            ++i.second;
        }
        stats.global_mean = total / static_cast<double>(log_->events.size());
        if (assumptions_.feedback.level == FeedbackModel::ImputeLevel::User)
            for (const auto& [u, sn] : by_user)
                stats.user_means[u] = sn.first / static_cast<double>(sn.second);
        if (assumptions_.feedback.level == FeedbackModel::ImputeLevel::Item)
            for (const auto& [i, sn] : by_item)
                stats.item_means[i] = sn.first / static_cast<double>(sn.second);
        assumptions_.feedback.frozen = std::move(stats);
    }
}

Simulator build_simulator(std::shared_ptr<const InteractionLog> log,
                          const DesignAssumptions& assumptions) {
    return Simulator(std::move(log), assumptions);
}

DesignAssumptions Simulator::frozen_assumptions() const { return assumptions_; }

std::set<ItemId> Simulator::candidates_for(const UserId& user) const {
    if (user.empty()) return {};
    if (assumptions_.candidate_policy == CandidatePolicy::AllItems) return log_->items;
    std::set<ItemId> out = log_->items;
    if (auto it = consumed_in_log_.find(user); it != consumed_in_log_.end())
        for (const auto& item : it->second) out.erase(item);
    if (auto it = shown_this_episode_.find(user); it != shown_this_episode_.end())
        for (const auto& item : it->second) out.erase(item);
    return out;
}

bool Simulator::draw_arrival() {
    switch (assumptions_.arrival) {
        case ArrivalKind::SequentialReplay: {
            // Walk the log in timestamp order, skipping exhausted users.
            while (replay_cursor_ < log_->events.size()) {
                const auto& e = log_->events[replay_cursor_];
                ++replay_cursor_;
                if (!eligible(e.user)) continue;
                current_user_ = e.user;
                current_context_ = e.context;
                return true;
            }
            return false;
        }
        case ArrivalKind::EmpiricalFrequency: {
            std::int64_t total = 0;
            std::vector<std::size_t> pool;
            for (std::size_t i = 0; i < users_sorted_.size(); ++i) {
                if (!eligible(users_sorted_[i])) continue;
                pool.push_back(i);
                total += user_weights_[i];
            }
            if (total <= 0) return false;
            std::int64_t r =
                static_cast<std::int64_t>(arrival_rng_.bounded(static_cast<std::uint64_t>(total)));
            for (std::size_t i : pool) {
                r -= user_weights_[i];
                if (r < 0) {
                    current_user_ = users_sorted_[i];
                    current_context_.clear();
                    return true;
                }
            }
            return false;
        }
        case ArrivalKind::UniformRandom: {
            std::vector<std::size_t> pool;
            for (std::size_t i = 0; i < users_sorted_.size(); ++i)
                if (eligible(users_sorted_[i])) pool.push_back(i);
            if (pool.empty()) return false;
            current_user_ = users_sorted_[pool[arrival_rng_.bounded(pool.size())]];
            current_context_.clear();
            return true;
        }
    }
    return false;
}

void Simulator::reset(Xoshiro256StarStar arrival_stream) {
    arrival_rng_ = arrival_stream;
    replay_cursor_ = 0;
    steps_taken_ = 0;
    shown_this_episode_.clear();
    current_context_.clear();
    current_user_.clear();
    has_reset_ = true;
    terminal_ = !draw_arrival();
}

RawOutcome Simulator::transition(const Action& action) {
    if (!has_reset_) throw EpisodeFinished("transition before reset");
    if (terminal_) throw EpisodeFinished("episode is over; reset before stepping");

    if (action.slate.empty()) throw InvalidAction("slate must contain at least one item");
    const auto candidates = candidates_for(current_user_);
    std::set<ItemId> seen;
    for (const auto& item : action.slate) {
        if (!seen.insert(item).second)
            throw InvalidAction("duplicate item '" + item + "' in slate");
        if (!candidates.count(item))
            throw InvalidAction("item '" + item + "' not in the current candidate set");
    }

    RawOutcome out;
    out.action_taken = action;
    out.feedback.reserve(action.slate.size());
    for (const auto& item : action.slate) {
        auto it = lookup_.find({current_user_, item});
        if (it != lookup_.end()) {
            out.feedback.push_back(it->second);  // observed data wins
            continue;
        }
        const auto& fm = assumptions_.feedback;
        switch (fm.kind) {
            case FeedbackModel::Kind::LookupSkip:
                out.feedback.push_back(std::nullopt);
                break;
            case FeedbackModel::Kind::LookupDefault:
                out.feedback.push_back(fm.default_value);
                break;
            case FeedbackModel::Kind::ImputeMAR: {
                const auto& stats = *fm.frozen;
                double value = stats.global_mean;
                if (fm.level == FeedbackModel::ImputeLevel::User) {
                    if (auto m = stats.user_means.find(current_user_); m != stats.user_means.end())
                        value = m->second;
                } else if (fm.level == FeedbackModel::ImputeLevel::Item) {
                    if (auto m = stats.item_means.find(item); m != stats.item_means.end())
                        value = m->second;
                }
                out.feedback.push_back(value);
                break;
            }
        }
    }

    if (assumptions_.candidate_policy == CandidatePolicy::ExcludeConsumed)
        shown_this_episode_[current_user_].insert(action.slate.begin(), action.slate.end());

    ++steps_taken_;
    out.step_index = steps_taken_;
    if (steps_taken_ >= assumptions_.episode_length_max) {
        terminal_ = true;
    } else {
        terminal_ = !draw_arrival();
    }
    // On termination no further arrival happens; the outcome echoes the last
    // active user with an empty context.
    if (terminal_) current_context_.clear();
    out.user = current_user_;
    out.context = current_context_;
    out.terminal = terminal_;
    return out;
}

}  // namespace rsenv
