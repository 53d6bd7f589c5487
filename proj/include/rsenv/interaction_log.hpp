#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rsenv/types.hpp"

namespace rsenv {

/// One observed user-item interaction from the ground-truth log.
struct InteractionEvent {
    UserId user;
    ItemId item;
    double feedback = 0.0;
    std::int64_t timestamp = 0;
    std::optional<double> propensity;  // in (0, 1] when present
    ContextMap context;

    bool operator==(const InteractionEvent&) const = default;
};

/// Column-name mapping for CSV ingestion, plus an optional declared feedback
/// range. When the range is declared it wins over the observed min/max and
/// out-of-range rows are parse errors.
struct LogSchema {
    std::string user_col = "user_id";
    std::string item_col = "item_id";
    std::string feedback_col = "feedback";
    std::string timestamp_col = "timestamp";
    std::string propensity_col = "propensity";
    std::optional<std::pair<double, double>> feedback_range;
};

/// The Observed Data: events sorted by (timestamp, stable input order),
/// immutable after load.
struct InteractionLog {
    std::vector<InteractionEvent> events;
    std::pair<double, double> feedback_range{0.0, 0.0};
    std::set<UserId> users;
    std::set<ItemId> items;

    bool empty() const { return events.empty(); }

    /// Union of context keys appearing anywhere in the log.
    std::set<std::string> context_keys() const;

    bool operator==(const InteractionLog&) const = default;
};

struct ValidationReport {
    std::size_t duplicate_count = 0;
    std::size_t missing_propensity_count = 0;
    std::size_t out_of_range_count = 0;
    std::size_t user_count = 0;
    std::size_t item_count = 0;
    double density = 0.0;  // distinct (user,item) pairs / (users x items)
};

enum class Aggregation { Last, Mean };

/// Sparse user-item matrix; absent cells are missing, never zero.
struct RatingMatrix {
    std::map<std::pair<UserId, ItemId>, double> cells;
    std::set<UserId> users;
    std::set<ItemId> items;

    std::optional<double> at(const UserId& u, const ItemId& i) const {
        auto it = cells.find({u, i});
        if (it == cells.end()) return std::nullopt;
        return it->second;
    }
};

/// Builds a log from in-memory events: stable-sorts by timestamp and derives
/// the id sets and (unless declared) the feedback range.
InteractionLog log_from_events(std::vector<InteractionEvent> events,
                               std::optional<std::pair<double, double>> declared_range = {});

/// Loads a UTF-8 CSV with a header row. Required columns per the schema
/// mapping; unmapped columns become context keys parsed as decimal reals.
InteractionLog load_interaction_log(const std::filesystem::path& path,
                                    const LogSchema& schema = {});

/// Writes the log back out under the standard column names (context columns
/// sorted). load(save(log), same schema) == log.
void save_interaction_log(const InteractionLog& log, const std::filesystem::path& path);

ValidationReport validate(const InteractionLog& log);

RatingMatrix to_matrix(const InteractionLog& log, Aggregation aggregation);

}  // namespace rsenv
