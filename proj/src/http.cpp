#include "astra/http.hpp"

#include "astra/error.hpp"

namespace astra::http {

BaseUrl parse_base_url(std::string_view url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) {
        throw Error(ErrorKind::InvalidConfig, "http", "not a URL: " + std::string(url));
    }
    auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw Error(ErrorKind::InvalidConfig, "http", "unsupported scheme in " + std::string(url));
    }
    auto rest = url.substr(scheme_end + 3);
    auto slash = rest.find('/');
    auto authority = rest.substr(0, slash);
    if (authority.empty()) {
        throw Error(ErrorKind::InvalidConfig, "http", "missing host in " + std::string(url));
    }
    BaseUrl out;
    out.scheme_host_port = std::string(scheme) + "://" + std::string(authority);
    if (slash != std::string_view::npos) {
        std::string prefix(rest.substr(slash));
        while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
        out.path_prefix = prefix;
    }
    return out;
}

}  // namespace astra::http
