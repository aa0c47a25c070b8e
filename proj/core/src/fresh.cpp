#include "alp/fresh.hpp"

namespace alp {

std::vector<std::string> fresh_pool(const std::string& domain,
                                    std::size_t count,
                                    const std::set<std::string>& taken) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string base = "f" + domain + std::to_string(i);
    while (taken.count(base)) base += "'";
    out.push_back(base);
  }
  return out;
}

std::set<std::string> all_tokens(const Configuration& conf) {
  std::set<std::string> out;
  for (const auto& f : conf.facts)
    out.insert(f.values.begin(), f.values.end());
  for (const auto& c : conf.admitted) out.insert(c.token);
  return out;
}

}  // namespace alp
