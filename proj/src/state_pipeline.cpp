#include "rsenv/state_pipeline.hpp"

#include <algorithm>
#include <limits>

#include "rsenv/errors.hpp"

namespace rsenv {

FeatureStage user_one_hot_stage() {
    FeatureStage s;
    s.kind = FeatureStage::Kind::UserIdOneHot;
    return s;
}

FeatureStage user_profile_mean_stage() {
    FeatureStage s;
    s.kind = FeatureStage::Kind::UserProfileMean;
    return s;
}

FeatureStage context_key_stage(std::string key, double missing_default) {
    FeatureStage s;
    s.kind = FeatureStage::Kind::ContextKey;
    s.context_key = std::move(key);
    s.missing_default = missing_default;
    s.fitted = true;  // nothing to fit
    return s;
}

FeatureStage clock_scaled_stage(double denominator) {
    FeatureStage s;
    s.kind = FeatureStage::Kind::ClockScaled;
    s.denominator = denominator;
    s.fitted = true;
    return s;
}

FeatureStage normalize_stage() {
    FeatureStage s;
    s.kind = FeatureStage::Kind::Normalize;
    return s;
}

namespace {

std::size_t stage_dimension(const FeatureStage& s) {
    switch (s.kind) {
        case FeatureStage::Kind::UserIdOneHot: return s.user_index.size();
        case FeatureStage::Kind::UserProfileMean: return 1;
        case FeatureStage::Kind::ContextKey: return 1;
        case FeatureStage::Kind::ClockScaled: return 1;
        case FeatureStage::Kind::Normalize: return 0;  // rescales in place
    }
    return 0;
}

void validate_stage(const FeatureStage& s) {
    if (s.kind == FeatureStage::Kind::ContextKey && s.context_key.empty())
        throw InvalidSpec("ContextKey stage requires a key name");
    if (s.kind == FeatureStage::Kind::ClockScaled && !(s.denominator > 0.0))
        throw InvalidSpec("ClockScaled denominator must be > 0");
}

/// Applies the stages in [0, upto) to an outcome, appending generator blocks
/// and applying Normalize rescales. Shared by fitting and runtime paths.
void run_stages(const StatePipelineSpec& spec, std::size_t upto, const RawOutcome& x,
                std::vector<double>& out, std::atomic<std::uint64_t>* clamp_count) {
    for (std::size_t si = 0; si < upto; ++si) {
        const auto& s = spec.stages[si];
        switch (s.kind) {
            case FeatureStage::Kind::UserIdOneHot: {
                const std::size_t base = out.size();
                out.resize(base + s.user_index.size(), 0.0);
                auto it = std::lower_bound(s.user_index.begin(), s.user_index.end(), x.user);
                if (it != s.user_index.end() && *it == x.user)
                    out[base + static_cast<std::size_t>(it - s.user_index.begin())] = 1.0;
                // unknown user: the block stays all zeros
                break;
            }
            case FeatureStage::Kind::UserProfileMean: {
                auto it = s.user_means.find(x.user);
                out.push_back(it == s.user_means.end() ? 0.0 : it->second);
                break;
            }
            case FeatureStage::Kind::ContextKey: {
                auto it = x.context.find(s.context_key);
                out.push_back(it == x.context.end() ? s.missing_default : it->second);
                break;
            }
            case FeatureStage::Kind::ClockScaled:
                out.push_back(static_cast<double>(x.step_index) / s.denominator);
                break;
            case FeatureStage::Kind::Normalize: {
                for (std::size_t d = 0; d < out.size() && d < s.mins.size(); ++d) {
                    const double lo = s.mins[d], hi = s.maxs[d];
                    double v = hi > lo ? (out[d] - lo) / (hi - lo) : 0.0;
                    const double clamped = std::clamp(v, 0.0, 1.0);
                    if (clamped != v && clamp_count)
                        clamp_count->fetch_add(1, std::memory_order_relaxed);
                    out[d] = clamped;
                }
                break;
            }
        }
    }
}

/// Pseudo-outcome for fitting: the log event as the world the agent saw.
RawOutcome fit_outcome(const InteractionEvent& e, std::int64_t index) {
    RawOutcome x;
    x.user = e.user;
    x.context = e.context;
    x.step_index = index;
    return x;
}

}  // namespace

StateRepresentation StateRepresentation::build(const StatePipelineSpec& spec,
                                               const InteractionLog& log) {
    if (spec.stages.empty()) throw EmptyPipeline("state pipeline requires at least one stage");

    StateRepresentation sr;
    sr.spec_ = spec;
    for (std::size_t si = 0; si < sr.spec_.stages.size(); ++si) {
        auto& s = sr.spec_.stages[si];
        validate_stage(s);
        if (s.fitted) continue;
        switch (s.kind) {
            case FeatureStage::Kind::UserIdOneHot:
                if (log.empty()) throw EmptyLog("UserIdOneHot requires a non-empty log to fit");
                s.user_index.assign(log.users.begin(), log.users.end());  // sorted
                break;
            case FeatureStage::Kind::UserProfileMean: {
                if (log.empty()) throw EmptyLog("UserProfileMean requires a non-empty log to fit");
                std::map<UserId, std::pair<double, std::size_t>> sums;
                for (const auto& e : log.events) {
                    auto& [sum, n] = sums[e.user];
                    sum += e.feedback;
                    ++n;
                }
                for (const auto& [u, sn] : sums)
                    s.user_means[u] = sn.first / static_cast<double>(sn.second);
                break;
            }
            case FeatureStage::Kind::Normalize: {
                if (log.empty()) throw EmptyLog("Normalize requires a non-empty log to fit");
                // Min/max of the preceding stages' output over the log's own
                // events, replayed in timestamp order.
                std::vector<double> mins, maxs;
                for (std::size_t ei = 0; ei < log.events.size(); ++ei) {
                    std::vector<double> v;
                    run_stages(sr.spec_, si, fit_outcome(log.events[ei], static_cast<std::int64_t>(ei)),
                               v, nullptr);
                    if (mins.empty()) {
                        mins.assign(v.size(), std::numeric_limits<double>::infinity());
                        maxs.assign(v.size(), -std::numeric_limits<double>::infinity());
                    }
                    for (std::size_t d = 0; d < v.size(); ++d) {
                        mins[d] = std::min(mins[d], v[d]);
                        maxs[d] = std::max(maxs[d], v[d]);
                    }
                }
                s.mins = std::move(mins);
                s.maxs = std::move(maxs);
                break;
            }
            case FeatureStage::Kind::ContextKey:
            case FeatureStage::Kind::ClockScaled:
                break;
        }
        s.fitted = true;
    }

    sr.dimension_ = 0;
    for (const auto& s : sr.spec_.stages) sr.dimension_ += stage_dimension(s);
    if (sr.dimension_ == 0) throw EmptyPipeline("state pipeline produces no features");
    return sr;
}

StateRepresentation StateRepresentation::from_frozen(const StatePipelineSpec& spec) {
    if (spec.stages.empty()) throw EmptyPipeline("state pipeline requires at least one stage");
    StateRepresentation sr;
    sr.spec_ = spec;
    for (auto& s : sr.spec_.stages) {
        validate_stage(s);
        if (!s.fitted)
            throw InvalidSpec("from_frozen requires every stage to carry frozen statistics");
    }
    sr.dimension_ = 0;
    for (const auto& s : sr.spec_.stages) sr.dimension_ += stage_dimension(s);
    if (sr.dimension_ == 0) throw EmptyPipeline("state pipeline produces no features");
    return sr;
}

StateRepresentation build_state_repr(const StatePipelineSpec& spec, const InteractionLog& log) {
    return StateRepresentation::build(spec, log);
}

void StateRepresentation::compute_features(const RawOutcome& x, std::vector<double>& out) const {
    out.clear();
    out.reserve(dimension_);
    run_stages(spec_, spec_.stages.size(), x, out, &clamp_count_);
}

State StateRepresentation::apply(const RawOutcome& x, std::set<ItemId> candidates) const {
    State s;
    compute_features(x, s.features);
    s.user = x.user;
    s.candidates = std::move(candidates);
    s.clock = x.step_index;
    return s;
}

std::vector<std::string> StateRepresentation::required_context_keys() const {
    std::vector<std::string> keys;
    for (const auto& s : spec_.stages)
        if (s.kind == FeatureStage::Kind::ContextKey) keys.push_back(s.context_key);
    return keys;
}

}  // namespace rsenv
