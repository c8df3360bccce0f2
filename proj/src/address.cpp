#include "proxconvoy/address.hpp"

#include "proxconvoy/errors.hpp"

#include <cctype>

namespace proxconvoy {

bool looks_like_address(std::string_view text) {
    if (text.size() != 17)
        return false;
    const char sep = text[2];
    if (sep != ':' && sep != '-')
        return false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (i % 3 == 2) {
            if (text[i] != sep)
                return false;
        } else if (!std::isxdigit(c)) {
            return false;
        }
    }
    return true;
}

std::string canonical_address(std::string_view text) {
    if (!looks_like_address(text))
        throw invalid_address(std::string(text));
    std::string out(text);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i % 3 == 2)
            out[i] = ':';
        else
            out[i] = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
    }
    return out;
}

} // namespace proxconvoy
