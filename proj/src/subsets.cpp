// Copyright 2026 The coopee Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "coopee/subsets.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace coopee {

SubsetTables::SubsetTables(int users, int relays) : users_(users), relays_(relays) {
  if (relays < 1 || relays > kMaxRelays)
    throw std::invalid_argument("subset tables support 1.." + std::to_string(kMaxRelays) +
                                " relays, got " + std::to_string(relays));
  if (users < 1 || users > relays)
    throw std::invalid_argument("subset tables need 1 <= M <= N");
  all_ = relays == 32 ? ~0u : ((1u << relays) - 1u);
  by_size_.resize(static_cast<std::size_t>(relays) + 1);
  for (std::uint32_t mask = 0; mask <= all_; ++mask) {
    by_size_[static_cast<std::size_t>(std::popcount(mask))].push_back(mask);
    if (mask == all_) break;
  }
}

const SubsetTables& SubsetTables::shared(int users, int relays) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<const SubsetTables>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{users, relays}];
  if (!slot) slot = std::make_unique<const SubsetTables>(users, relays);
  return *slot;
}

}  // namespace coopee
