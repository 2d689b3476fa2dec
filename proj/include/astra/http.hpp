#pragma once

#include <string>
#include <string_view>

namespace astra::http {

/// `scheme://host[:port][/prefix]` split into what the HTTP client needs.
struct BaseUrl {
    std::string scheme_host_port;
    std::string path_prefix;  // no trailing slash, may be empty

    std::string path(std::string_view suffix) const { return path_prefix + std::string(suffix); }
};

/// Throws InvalidConfig on anything that is not an http(s) URL.
BaseUrl parse_base_url(std::string_view url);

}  // namespace astra::http
