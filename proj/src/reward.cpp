#include "rsenv/reward.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "rsenv/errors.hpp"

namespace rsenv {

namespace {

double dcg_weight_sum(std::size_t k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += 1.0 / std::log2(static_cast<double>(j) + 1.0);
    return s;
}

}  // namespace

RewardFunction::RewardFunction(RewardSpec spec, std::pair<double, double> feedback_range)
    : spec_(std::move(spec)), feedback_range_(feedback_range) {
    if (!(spec_.bounds.first < spec_.bounds.second))
        throw InvalidSpec("reward bounds must satisfy r_min < r_max");
    if (!(feedback_range_.first <= feedback_range_.second))
        throw InvalidSpec("feedback range must satisfy f_min <= f_max");
    if (spec_.kind == RewardSpec::Kind::BinaryClick &&
        (spec_.click_threshold < feedback_range_.first ||
         spec_.click_threshold > feedback_range_.second))
        throw InvalidSpec("click threshold must lie inside the feedback range");
    if (spec_.kind == RewardSpec::Kind::Revenue) {
        if (spec_.prices.empty()) throw InvalidSpec("Revenue requires a non-empty price map");
        for (const auto& [item, price] : spec_.prices)
            if (!std::isfinite(price) || price < 0.0)
                throw InvalidSpec("price for '" + item + "' must be finite and non-negative");
    }
}

RewardFunction make_reward_fn(const RewardSpec& spec, std::pair<double, double> feedback_range) {
    return RewardFunction(spec, feedback_range);
}

double RewardFunction::resolve(const std::optional<double>& slot) const {
    if (slot) return *slot;
    return spec_.missing_policy == RewardSpec::MissingPolicy::TreatAsZero ? 0.0
                                                                          : feedback_range_.first;
}

double RewardFunction::raw_value(const RawOutcome& x) const {
    switch (spec_.kind) {
        case RewardSpec::Kind::Rating:
            return x.feedback.empty() ? resolve(std::nullopt) : resolve(x.feedback.front());
        case RewardSpec::Kind::BinaryClick: {
            const double v =
                x.feedback.empty() ? resolve(std::nullopt) : resolve(x.feedback.front());
            return v >= spec_.click_threshold ? 1.0 : 0.0;
        }
        case RewardSpec::Kind::SlateSum: {
            double s = 0.0;
            for (const auto& slot : x.feedback) s += resolve(slot);
            return s;
        }
        case RewardSpec::Kind::SlateDCG: {
            double s = 0.0;
            for (std::size_t j = 0; j < x.feedback.size(); ++j)
                s += resolve(x.feedback[j]) / std::log2(static_cast<double>(j) + 2.0);
            return s;
        }
        case RewardSpec::Kind::Revenue: {
            double s = 0.0;
            for (std::size_t j = 0; j < x.feedback.size(); ++j) {
                if (resolve(x.feedback[j]) <= 0.0) continue;
                auto it = spec_.prices.find(x.action_taken.slate[j]);
                if (it != spec_.prices.end()) s += it->second;
            }
            return s;
        }
    }
    return 0.0;
}

std::pair<double, double> RewardFunction::natural_range(std::size_t slate_len) const {
    const auto [f_min, f_max] = feedback_range_;
    const double k = static_cast<double>(slate_len);
    switch (spec_.kind) {
        case RewardSpec::Kind::Rating:
            return {f_min, f_max};
        case RewardSpec::Kind::BinaryClick:
            return {0.0, 1.0};
        case RewardSpec::Kind::SlateSum:
            return {k * f_min, k * f_max};
        case RewardSpec::Kind::SlateDCG: {
            const double w = dcg_weight_sum(slate_len);
            return {f_min * w, f_max * w};
        }
        case RewardSpec::Kind::Revenue: {
            // Data-independent upper bound: the largest possible slate-sum
            // of prices for this slate length.
            std::vector<double> prices;
            prices.reserve(spec_.prices.size());
            for (const auto& [item, price] : spec_.prices) prices.push_back(price);
            std::sort(prices.begin(), prices.end(), std::greater<>());
            double top = 0.0;
            for (std::size_t j = 0; j < std::min(slate_len, prices.size()); ++j) top += prices[j];
            return {0.0, top};
        }
    }
    return {0.0, 1.0};
}

double RewardFunction::apply(const RawOutcome& x) const {
    double value = raw_value(x);
    if (spec_.normalize) {
        const std::size_t len = std::max<std::size_t>(x.feedback.size(), 1);
        const auto [lo, hi] = natural_range(len);
        const auto [r_min, r_max] = spec_.bounds;
        if (hi <= lo) {
            value = r_min;
        } else if (value == lo) {
            value = r_min;  // pin the endpoints exactly
        } else if (value == hi) {
            value = r_max;
        } else {
            value = r_min + (value - lo) / (hi - lo) * (r_max - r_min);
        }
    }
    const double clamped = std::clamp(value, spec_.bounds.first, spec_.bounds.second);
    if (clamped != value) clamp_count_.fetch_add(1, std::memory_order_relaxed);
    return clamped;
}

}  // namespace rsenv
