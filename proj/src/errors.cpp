#include "proxconvoy/errors.hpp"

#include <fmt/format.h>

namespace proxconvoy {

invalid_address::invalid_address(const std::string& text)
    : error(fmt::format("invalid hardware address '{}'", text)) {}

duplicate_bssid::duplicate_bssid(const std::string& bssid)
    : error(fmt::format("duplicate bssid {} in environment", bssid)) {}

non_monotone_timestamp::non_monotone_timestamp(const std::string& device, double t,
                                               double last)
    : error(fmt::format("non-monotone timestamp for {}: {} <= last sample {}", device, t,
                        last)) {}

unknown_device::unknown_device(const std::string& device)
    : error(fmt::format("unknown device {}", device)) {}

empty_track::empty_track() : error("track is empty") {}

empty_environment::empty_environment()
    : error("environment snapshot is empty, nothing to compare against") {}

parse_error::parse_error(std::size_t line, const std::string& what)
    : error(fmt::format("line {}: {}", line, what)), line_(line) {}

syntax_error::syntax_error(std::size_t line, std::size_t column, const std::string& what)
    : error(fmt::format("{}:{}: {}", line, column, what)), line_(line), column_(column) {}

duplicate_rule_id::duplicate_rule_id(const std::string& id)
    : error(fmt::format("duplicate rule id '{}'", id)) {}

} // namespace proxconvoy
