#include "rsenv/interaction_log.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "rsenv/canonical.hpp"
#include "rsenv/errors.hpp"

namespace rsenv {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    // Exact parsing, no quoting or locale-dependent formats.
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

double parse_real(const std::string& s, std::size_t line, const std::string& what) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(line, "malformed " + what + " value '" + s + "'");
    return value;
}

std::int64_t parse_int(const std::string& s, std::size_t line, const std::string& what) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError(line, "malformed " + what + " value '" + s + "'");
    return value;
}

void finalize(InteractionLog& log, std::optional<std::pair<double, double>> declared_range) {
    std::stable_sort(log.events.begin(), log.events.end(),
                     [](const InteractionEvent& a, const InteractionEvent& b) {
                         return a.timestamp < b.timestamp;
                     });
    log.users.clear();
    log.items.clear();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& e : log.events) {
        log.users.insert(e.user);
        log.items.insert(e.item);
        lo = std::min(lo, e.feedback);
        hi = std::max(hi, e.feedback);
    }
    if (declared_range) {
        log.feedback_range = *declared_range;
    } else {
        log.feedback_range = log.events.empty() ? std::pair<double, double>{0.0, 0.0}
                                                : std::pair<double, double>{lo, hi};
    }
}

}  // namespace

std::set<std::string> InteractionLog::context_keys() const {
    std::set<std::string> keys;
    for (const auto& e : events)
        for (const auto& [k, v] : e.context) keys.insert(k);
    return keys;
}

InteractionLog log_from_events(std::vector<InteractionEvent> events,
                               std::optional<std::pair<double, double>> declared_range) {
    if (declared_range && declared_range->first >= declared_range->second)
        throw InvalidSpec("declared feedback range must satisfy f_min < f_max");
    InteractionLog log;
    log.events = std::move(events);
    for (std::size_t i = 0; i < log.events.size(); ++i) {
        const auto& e = log.events[i];
        if (e.user.empty() || e.item.empty())
            throw ParseError(i + 1, "empty user or item id");
        if (e.propensity && (*e.propensity <= 0.0 || *e.propensity > 1.0))
            throw ParseError(i + 1, "propensity must lie in (0, 1]");
        if (declared_range &&
            (e.feedback < declared_range->first || e.feedback > declared_range->second))
            throw ParseError(i + 1, "feedback outside declared range");
    }
    finalize(log, declared_range);
    return log;
}

InteractionLog load_interaction_log(const std::filesystem::path& path, const LogSchema& schema) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path.string());

    std::string header_line;
    if (!std::getline(in, header_line)) throw ParseError(1, "missing header row");
    const auto header = split_csv_line(header_line);

    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    auto required = [&](const std::string& name) {
        auto idx = column(name);
        if (!idx) throw MissingColumn("required column '" + name + "' not found in " + path.string());
        return *idx;
    };

    const std::size_t user_idx = required(schema.user_col);
    const std::size_t item_idx = required(schema.item_col);
    const std::size_t feedback_idx = required(schema.feedback_col);
    const std::size_t timestamp_idx = required(schema.timestamp_col);
    const auto propensity_idx = column(schema.propensity_col);

    // Every unmapped column becomes a context key.
    std::vector<std::pair<std::size_t, std::string>> context_columns;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i == user_idx || i == item_idx || i == feedback_idx || i == timestamp_idx) continue;
        if (propensity_idx && i == *propensity_idx) continue;
        context_columns.emplace_back(i, header[i]);
    }

    InteractionLog log;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, got " +
                                          std::to_string(fields.size()));
        InteractionEvent e;
        e.user = fields[user_idx];
        e.item = fields[item_idx];
        if (e.user.empty()) throw ParseError(line_no, "empty user id");
        if (e.item.empty()) throw ParseError(line_no, "empty item id");
        e.feedback = parse_real(fields[feedback_idx], line_no, "feedback");
        e.timestamp = parse_int(fields[timestamp_idx], line_no, "timestamp");
        if (propensity_idx && !fields[*propensity_idx].empty()) {
            const double p = parse_real(fields[*propensity_idx], line_no, "propensity");
            if (p <= 0.0 || p > 1.0)
                throw ParseError(line_no, "propensity must lie in (0, 1], got " + fields[*propensity_idx]);
            e.propensity = p;
        }
        for (const auto& [idx, key] : context_columns) {
            if (fields[idx].empty()) continue;
            e.context[key] = parse_real(fields[idx], line_no, "context '" + key + "'");
        }
        if (schema.feedback_range &&
            (e.feedback < schema.feedback_range->first || e.feedback > schema.feedback_range->second))
            throw ParseError(line_no, "feedback " + fields[feedback_idx] + " outside declared range");
        log.events.push_back(std::move(e));
    }

    finalize(log, schema.feedback_range);
    return log;
}

void save_interaction_log(const InteractionLog& log, const std::filesystem::path& path) {
    const auto ctx_keys = log.context_keys();
    const bool any_propensity =
        std::any_of(log.events.begin(), log.events.end(),
                    [](const InteractionEvent& e) { return e.propensity.has_value(); });

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());

    out << "user_id,item_id,feedback,timestamp";
    if (any_propensity) out << ",propensity";
    for (const auto& k : ctx_keys) out << ',' << k;
    out << '\n';

    for (const auto& e : log.events) {
        out << e.user << ',' << e.item << ',' << shortest_double(e.feedback) << ',' << e.timestamp;
        if (any_propensity) {
            out << ',';
            if (e.propensity) out << shortest_double(*e.propensity);
        }
        for (const auto& k : ctx_keys) {
            out << ',';
            auto it = e.context.find(k);
            if (it != e.context.end()) out << shortest_double(it->second);
        }
        out << '\n';
    }
}

ValidationReport validate(const InteractionLog& log) {
    ValidationReport report;
    report.user_count = log.users.size();
    report.item_count = log.items.size();

    std::set<std::tuple<UserId, ItemId, std::int64_t>> triples;
    std::set<std::pair<UserId, ItemId>> pairs;
    for (const auto& e : log.events) {
        triples.insert({e.user, e.item, e.timestamp});
        pairs.insert({e.user, e.item});
        if (!e.propensity) ++report.missing_propensity_count;
        if (e.feedback < log.feedback_range.first || e.feedback > log.feedback_range.second)
            ++report.out_of_range_count;
    }
    report.duplicate_count = log.events.size() - triples.size();
    const std::size_t cells = report.user_count * report.item_count;
    report.density = cells == 0 ? 0.0 : static_cast<double>(pairs.size()) / static_cast<double>(cells);
    return report;
}

RatingMatrix to_matrix(const InteractionLog& log, Aggregation aggregation) {
    RatingMatrix m;
    m.users = log.users;
    m.items = log.items;
    if (aggregation == Aggregation::Last) {
        // Events are sorted by timestamp; the last write wins.
        for (const auto& e : log.events) m.cells[{e.user, e.item}] = e.feedback;
    } else {
        std::map<std::pair<UserId, ItemId>, std::pair<double, std::size_t>> sums;
        for (const auto& e : log.events) {
            auto& [sum, n] = sums[{e.user, e.item}];
            sum += e.feedback;
            ++n;
        }
        for (const auto& [key, sn] : sums) m.cells[key] = sn.first / static_cast<double>(sn.second);
    }
    return m;
}

}  // namespace rsenv
