#pragma once

#include <string>
#include <string_view>

namespace proxconvoy {

/// True if `text` is six hex octets separated by ':' or '-'.
bool looks_like_address(std::string_view text);

/// Canonical form of a hardware address: lowercase, colon separated.
/// Throws invalid_address unless looks_like_address(text).
std::string canonical_address(std::string_view text);

} // namespace proxconvoy
