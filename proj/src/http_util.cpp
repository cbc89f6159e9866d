#include "peerpanel/http_util.hpp"

#include "peerpanel/errors.hpp"

namespace peerpanel {

BaseUrl split_base_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  const auto host_start = scheme_end == std::string_view::npos ? 0 : scheme_end + 3;
  const auto slash = url.find('/', host_start);
  BaseUrl out;
  if (slash == std::string_view::npos) {
    out.origin = std::string(url);
  } else {
    out.origin = std::string(url.substr(0, slash));
    out.path_prefix = std::string(url.substr(slash));
    while (!out.path_prefix.empty() && out.path_prefix.back() == '/') {
      out.path_prefix.pop_back();
    }
  }
  return out;
}

std::pair<std::string, int> split_host_port(std::string_view addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string_view::npos || colon + 1 == addr.size()) {
    throw ConfigError("expected host:port, got '" + std::string(addr) + "'");
  }
  try {
    return {std::string(addr.substr(0, colon)), std::stoi(std::string(addr.substr(colon + 1)))};
  } catch (const std::exception&) {
    throw ConfigError("bad port in '" + std::string(addr) + "'");
  }
}

}  // namespace peerpanel
