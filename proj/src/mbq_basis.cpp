#include <bit>
#include <map>
#include <mutex>
#include <string>

#include "busgate/mbq.hpp"

namespace busgate::mbq {

Basis::Basis(int sites) : sites_(sites) {
  if (sites < 1 || sites > 30) throw ConfigError("register size must be in 1..30 (got " + std::to_string(sites) + ")");
  const std::uint64_t dim = std::uint64_t{1} << sites;
  std::vector<std::uint64_t> counts(sites + 1, 0);
  for (std::uint64_t s = 0; s < dim; ++s) ++counts[std::popcount(s)];
  sectors_.resize(sites + 1);
  for (int k = 0; k <= sites; ++k) sectors_[k].reserve(counts[k]);
  rank_.resize(dim);
  for (std::uint64_t s = 0; s < dim; ++s) {
    auto& sec = sectors_[std::popcount(s)];
    rank_[s] = static_cast<std::uint32_t>(sec.size());
    sec.push_back(static_cast<std::uint32_t>(s));
  }
}

std::shared_ptr<const Basis> Basis::get(int sites) {
  static std::mutex mu;
  static std::map<int, std::weak_ptr<const Basis>> cache;
  static std::shared_ptr<const Basis> last;  // keeps the latest size alive between short-lived users
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[sites];
  auto p = slot.lock();
  if (!p) {
    p = std::make_shared<const Basis>(sites);
    slot = p;
  }
  last = p;
  return p;
}

}  // namespace busgate::mbq
