#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace proxconvoy {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class invalid_address : public error {
public:
    explicit invalid_address(const std::string& text);
};

class duplicate_bssid : public error {
public:
    explicit duplicate_bssid(const std::string& bssid);
};

class non_monotone_timestamp : public error {
public:
    non_monotone_timestamp(const std::string& device, double t, double last);
};

class unknown_device : public error {
public:
    explicit unknown_device(const std::string& device);
};

class empty_track : public error {
public:
    empty_track();
};

class empty_environment : public error {
public:
    empty_environment();
};

class invalid_params : public error {
public:
    using error::error;
};

class invalid_scenario : public error {
public:
    using error::error;
};

/// Malformed input line in one of the JSONL formats.
class parse_error : public error {
public:
    parse_error(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Rule text that does not follow the grammar.
class syntax_error : public error {
public:
    syntax_error(std::size_t line, std::size_t column, const std::string& what);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class duplicate_rule_id : public error {
public:
    explicit duplicate_rule_id(const std::string& id);
};

} // namespace proxconvoy
