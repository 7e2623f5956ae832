#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "nodeforge/net.hpp"

namespace nodeforge::net {

namespace {

// Splits scheme://host[:port] from /path?query.
std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, path_start), url.substr(path_start)};
}

httplib::Headers to_httplib(const Headers& headers) {
    httplib::Headers out;
    for (const auto& [k, v] : headers) out.emplace(k, v);
    return out;
}

HttpResponse from_result(httplib::Result&& result) {
    if (!result) {
        return {0, "transport failure: " + httplib::to_string(result.error())};
    }
    return {result->status, result->body};
}

}  // namespace

HttpResponse post_json(const std::string& url, const Headers& headers, const std::string& body,
                       int timeout_seconds) {
    auto [base, path] = split_url(url);
    httplib::Client client(base);
    client.set_connection_timeout(timeout_seconds);
    client.set_read_timeout(timeout_seconds);
    return from_result(client.Post(path, to_httplib(headers), body, "application/json"));
}

HttpResponse get(const std::string& url, const Headers& headers, int timeout_seconds) {
    auto [base, path] = split_url(url);
    httplib::Client client(base);
    client.set_connection_timeout(timeout_seconds);
    client.set_read_timeout(timeout_seconds);
    return from_result(client.Get(path, to_httplib(headers)));
}

}  // namespace nodeforge::net
