#include "rsenv/environment.hpp"

#include "rsenv/errors.hpp"

namespace rsenv {

Environment::Environment(Simulator sim, RewardFunction reward_fn, StateRepresentation state_repr,
                         std::pair<double, double> bounds, int slate_k)
    : sim_(std::move(sim)), reward_fn_(std::move(reward_fn)),
      state_repr_(std::move(state_repr)), bounds_(bounds), slate_k_(slate_k) {}

Environment compose_environment(Simulator sim, RewardFunction reward_fn,
                                StateRepresentation state_repr,
                                std::pair<double, double> bounds, int slate_k) {
    if (!(bounds.first < bounds.second))
        throw InvalidBounds("environment bounds must satisfy r_min < r_max");
    if (reward_fn.bounds() != bounds)
        throw InvalidBounds("reward function bounds disagree with the environment bounds");
    if (slate_k < 0) throw InvalidAction("slate_k must be >= 0");

    const auto emittable = sim.context_keys();
    for (const auto& key : state_repr.required_context_keys())
        if (!emittable.count(key))
            throw SchemaMismatch("state pipeline requires context key '" + key +
                                 "' which the simulator never emits");

    return Environment(std::move(sim), std::move(reward_fn), std::move(state_repr), bounds,
                       slate_k);
}

State Environment::reset(std::uint64_t seed) {
    sim_.reset(derive_stream(seed, "arrival"));

    RawOutcome initial;
    initial.step_index = 0;
    initial.user = sim_.current_user();
    initial.context = sim_.current_context();
    initial.terminal = sim_.terminal();

    state_ = state_repr_.apply(initial, sim_.current_candidates());
    done_ = initial.terminal;
    has_reset_ = true;
    return state_;
}

const State& Environment::current_state() const {
    if (!has_reset_) throw EpisodeFinished("reset() must be called first");
    return state_;
}

StepResult Environment::step(const Action& action) {
    if (!has_reset_) throw EpisodeFinished("reset() must be called before step()");
    if (done_) throw EpisodeFinished("episode is over; reset() before stepping again");
    if (slate_k_ > 0 && action.slate.size() != static_cast<std::size_t>(slate_k_))
        throw InvalidAction("slate must contain exactly " + std::to_string(slate_k_) + " items");

    const RawOutcome x = sim_.transition(action);

    StepResult result;
    result.reward = reward_fn_.apply(x);
    result.next_state = state_repr_.apply(x, sim_.current_candidates());
    result.done = x.terminal;
    result.raw = x;

    state_ = result.next_state;
    done_ = result.done;
    return result;
}

}  // namespace rsenv
