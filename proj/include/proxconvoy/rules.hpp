#pragma once

#include "proxconvoy/proximity.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace proxconvoy {

// -- condition AST ------------------------------------------------------------

struct predicate;
using predicate_ptr = std::shared_ptr<const predicate>;

/// Network reference: matches an ssid exactly, or a bssid when the text has
/// the shape of a hardware address.
struct is_visible { std::string net; };
struct not_visible { std::string net; };
/// First network visible and either the second invisible or strictly weaker.
struct close_than { std::string first; std::string second; };
struct first_visit {};
struct follow_up_visit {};
/// Minutes since midnight, half-open [begin, end), wrapping when end < begin.
struct time_within { int begin = 0; int end = 0; };

enum class time_relation { less, less_equal, equal, greater_equal, greater };
struct time_compare { time_relation relation = time_relation::equal; int minutes = 0; };

struct in_group_of_term { int n = 1; long seconds = 1; };

struct and_node { predicate_ptr lhs; predicate_ptr rhs; };
struct or_node { predicate_ptr lhs; predicate_ptr rhs; };
struct not_node { predicate_ptr operand; };

struct predicate {
    std::variant<is_visible, not_visible, close_than, first_visit, follow_up_visit, time_within,
                 time_compare, in_group_of_term, and_node, or_node, not_node>
        node;
};

/// Structural equality of two condition trees.
bool operator==(const predicate& a, const predicate& b);

struct rule {
    std::string id;
    predicate_ptr condition;
    std::string content;
};

bool operator==(const rule& a, const rule& b);

/// Immutable after parsing; safe to share between evaluating threads.
class ruleset {
public:
    ruleset() = default;
    /// Throws duplicate_rule_id.
    explicit ruleset(std::vector<rule> rules);

    const std::vector<rule>& rules() const noexcept { return rules_; }
    bool empty() const noexcept { return rules_.empty(); }
    std::size_t size() const noexcept { return rules_.size(); }

    friend bool operator==(const ruleset&, const ruleset&) = default;

private:
    std::vector<rule> rules_;
};

/// Parses
///
///     RULE <id> : IF <expr> THEN "<content>"
///
/// statements. Content may also be given in braces, `{ ... }`. `#` starts a
/// comment running to the end of the line. Throws syntax_error carrying the
/// line and column of the first offending token, or duplicate_rule_id.
ruleset parse_rules(std::string_view text);

/// Canonical text; parse_rules(to_string(x)) reproduces x.
std::string to_string(const predicate& p);
std::string to_string(const rule& r);
std::string to_string(const ruleset& rs);

// -- evaluation ---------------------------------------------------------------

/// Operator-tuned thresholds for IN_GROUP_OF; rule text only carries n and t.
struct engine_config {
    double delta = 5.0;
    double omega = 10.0;
    int min_steps = 2;
};

struct eval_context {
    explicit eval_context(device_id who) : device(std::move(who)) {}

    device_id device;
    double now = 0.0;
    environment_snapshot current;
    const proximity_log* log = nullptr; // history; may be null
    double session_gap = 1800.0;
    double utc_offset = 0.0; // seconds added to `now` to get local time
    engine_config engine;

    /// Local minutes since midnight.
    int time_of_day() const;
};

bool eval_predicate(const predicate& p, const eval_context& ctx);

struct fired_rule {
    std::string id;
    std::string content;

    friend bool operator==(const fired_rule&, const fired_rule&) = default;
};

/// Rules whose condition holds, in declaration order.
std::vector<fired_rule> eval_rules(const ruleset& rules, const eval_context& ctx);

} // namespace proxconvoy
