#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rsenv/interaction_log.hpp"
#include "rsenv/types.hpp"

namespace rsenv {

/// One stage of the feature pipeline. Generator stages append a block to the
/// feature vector; the Normalize stage rescales everything produced so far
/// (min-max per dimension, fit on the log) in place and appends nothing.
/// Fit-based stages freeze their statistics at build time and carry them
/// through serialization, so reproducing an environment never refits.
struct FeatureStage {
    enum class Kind { UserIdOneHot, UserProfileMean, ContextKey, ClockScaled, Normalize };

    Kind kind = Kind::UserIdOneHot;

    // ContextKey
    std::string context_key;
    double missing_default = 0.0;

    // ClockScaled
    double denominator = 1.0;

    // Frozen statistics.
    std::vector<UserId> user_index;       // UserIdOneHot: sorted log user ids
    std::map<UserId, double> user_means;  // UserProfileMean
    std::vector<double> mins, maxs;       // Normalize: per preceding dimension
    bool fitted = false;

    bool operator==(const FeatureStage&) const = default;
};

FeatureStage user_one_hot_stage();
FeatureStage user_profile_mean_stage();
FeatureStage context_key_stage(std::string key, double missing_default = 0.0);
FeatureStage clock_scaled_stage(double denominator);
FeatureStage normalize_stage();

struct StatePipelineSpec {
    std::vector<FeatureStage> stages;

    bool operator==(const StatePipelineSpec&) const = default;
};

/// Compiled pipeline: pure after build, fixed output dimension. Unknown
/// users map to zero blocks; out-of-range values under Normalize are clamped
/// to [0, 1] and counted.
class StateRepresentation {
public:
    /// Fits any unfitted stages on the log and compiles the pipeline.
    static StateRepresentation build(const StatePipelineSpec& spec, const InteractionLog& log);

    /// Compiles a pipeline whose stages already carry frozen statistics
    /// (the manifest path; no log needed, nothing is refit).
    static StateRepresentation from_frozen(const StatePipelineSpec& spec);

    State apply(const RawOutcome& outcome, std::set<ItemId> candidates) const;

    std::size_t dimension() const { return dimension_; }
    const StatePipelineSpec& fitted_spec() const { return spec_; }
    std::uint64_t clamp_count() const { return clamp_count_.load(); }

    /// Context keys referenced by ContextKey stages (for schema checks).
    std::vector<std::string> required_context_keys() const;

    StateRepresentation(const StateRepresentation& other)
        : spec_(other.spec_), dimension_(other.dimension_),
          clamp_count_(other.clamp_count_.load()) {}
    StateRepresentation& operator=(const StateRepresentation& other) {
        spec_ = other.spec_;
        dimension_ = other.dimension_;
        clamp_count_ = other.clamp_count_.load();
        return *this;
    }

private:
    StateRepresentation() = default;
    void compute_features(const RawOutcome& outcome, std::vector<double>& out) const;

    StatePipelineSpec spec_;
    std::size_t dimension_ = 0;
    mutable std::atomic<std::uint64_t> clamp_count_{0};
};

StateRepresentation build_state_repr(const StatePipelineSpec& spec, const InteractionLog& log);

}  // namespace rsenv
