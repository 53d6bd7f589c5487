#pragma once

#include <cstdint>
#include <utility>

#include "rsenv/reward.hpp"
#include "rsenv/simulator.hpp"
#include "rsenv/state_pipeline.hpp"
#include "rsenv/types.hpp"

namespace rsenv {

/// A steppable task environment: the componentwise composition of a
/// Simulator, a RewardFunction and a StateRepresentation. For every step,
/// with x = simulator.transition(action):
///
///     step(action).reward     == reward_fn.apply(x)
///     step(action).next_state == state_repr.apply(x, candidates)
///
/// exactly, with no hidden coupling between the components. All randomness
/// derives from the seed passed to reset() via named per-component streams.
///
/// Single-threaded per instance; independent instances may run in parallel.
class Environment {
public:
    Environment(Simulator sim, RewardFunction reward_fn, StateRepresentation state_repr,
                std::pair<double, double> bounds, int slate_k = 0);

    /// Starts a fresh episode. All clocks return to step 0; every stream is
    /// re-derived from the seed. Returns the initial state (clock 0).
    State reset(std::uint64_t seed);

    StepResult step(const Action& action);

    const State& current_state() const;
    bool done() const { return done_; }

    std::pair<double, double> bounds() const { return bounds_; }
    /// Enforced slate length; 0 means any length is accepted.
    int slate_k() const { return slate_k_; }
    std::size_t dimension() const { return state_repr_.dimension(); }

    const Simulator& simulator() const { return sim_; }
    const RewardFunction& reward_fn() const { return reward_fn_; }
    const StateRepresentation& state_repr() const { return state_repr_; }

private:
    Simulator sim_;
    RewardFunction reward_fn_;
    StateRepresentation state_repr_;
    std::pair<double, double> bounds_;
    int slate_k_;

    State state_;
    bool has_reset_ = false;
    bool done_ = false;
};

/// Composes the three components into one environment, checking that the
/// state pipeline's context keys can be supplied by the simulator and that
/// the declared bounds are consistent.
Environment compose_environment(Simulator sim, RewardFunction reward_fn,
                                StateRepresentation state_repr,
                                std::pair<double, double> bounds, int slate_k = 0);

}  // namespace rsenv
