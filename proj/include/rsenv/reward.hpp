#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <utility>

#include "rsenv/types.hpp"

namespace rsenv {

/// Declarative description of how a raw outcome becomes a bounded reward.
///
/// Kinds and their natural value ranges (for a slate of length k over a
/// feedback range [f_min, f_max]):
///   Rating       first slot's resolved feedback            [f_min, f_max]
///   BinaryClick  1 if first slot >= threshold else 0       [0, 1]
///   SlateSum     sum of resolved slots                     [k*f_min, k*f_max]
///   SlateDCG     sum of resolved[j] / log2(j+1), j from 1  scaled by f range
///   Revenue      sum of prices over slots with positive    [0, top-k price sum]
///                resolved feedback
///
/// With `normalize` on, the natural range maps affinely onto `bounds`; the
/// result is always clamped to `bounds` (missing-policy substitutions can
/// fall outside the natural range) and clamps are counted.
struct RewardSpec {
    enum class Kind { Rating, BinaryClick, SlateSum, SlateDCG, Revenue };
    enum class MissingPolicy { TreatAsZero, TreatAsMin };

    Kind kind = Kind::Rating;
    double click_threshold = 0.0;       // BinaryClick
    std::map<ItemId, double> prices;    // Revenue; unpriced items count as 0
    MissingPolicy missing_policy = MissingPolicy::TreatAsZero;
    std::pair<double, double> bounds{0.0, 1.0};
    bool normalize = true;

    bool operator==(const RewardSpec&) const = default;
};

/// Compiled reward function: pure, stateless, bounded. The clamp counter is
/// a diagnostic and never influences outputs.
class RewardFunction {
public:
    RewardFunction(RewardSpec spec, std::pair<double, double> feedback_range);

    double apply(const RawOutcome& outcome) const;

    const RewardSpec& spec() const { return spec_; }
    std::pair<double, double> bounds() const { return spec_.bounds; }
    std::pair<double, double> feedback_range() const { return feedback_range_; }
    std::uint64_t clamp_count() const { return clamp_count_.load(); }

    RewardFunction(const RewardFunction& other)
        : spec_(other.spec_), feedback_range_(other.feedback_range_),
          clamp_count_(other.clamp_count_.load()) {}
    RewardFunction& operator=(const RewardFunction& other) {
        spec_ = other.spec_;
        feedback_range_ = other.feedback_range_;
        clamp_count_ = other.clamp_count_.load();
        return *this;
    }

private:
    double resolve(const std::optional<double>& slot) const;
    double raw_value(const RawOutcome& outcome) const;
    std::pair<double, double> natural_range(std::size_t slate_len) const;

    RewardSpec spec_;
    std::pair<double, double> feedback_range_;
    mutable std::atomic<std::uint64_t> clamp_count_{0};
};

RewardFunction make_reward_fn(const RewardSpec& spec, std::pair<double, double> feedback_range);

}  // namespace rsenv
