#pragma once

#include <string>
#include <string_view>

namespace peerpanel {

struct BaseUrl {
  std::string origin;       // scheme://host[:port]
  std::string path_prefix;  // "" or "/prefix" without trailing slash
};

/// Splits "http://host:8000/api/" into {"http://host:8000", "/api"}.
BaseUrl split_base_url(std::string_view url);

/// Splits "host:port" into its parts. Throws ConfigError.
std::pair<std::string, int> split_host_port(std::string_view addr);

}  // namespace peerpanel
