#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nodeforge::net {

struct HttpResponse {
    int status = 0;  // 0: transport failure, body holds the error text
    std::string body;
};

using Headers = std::vector<std::pair<std::string, std::string>>;

HttpResponse post_json(const std::string& url, const Headers& headers, const std::string& body,
                       int timeout_seconds = 120);

HttpResponse get(const std::string& url, const Headers& headers = {}, int timeout_seconds = 60);

}  // namespace nodeforge::net
