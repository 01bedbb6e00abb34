// Copyright 2026 The bnlab Authors
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

#include "bnlab/survivor.hpp"

#include <openssl/evp.h>

#include <cstdio>

#include "bnlab/errors.hpp"

namespace bnlab {

SurvivorSet::SurvivorSet(const ProfileSpace& space, bool fill)
    : space_(space), bits_((space.total() + 63) / 64, 0) {
  if (fill) {
    for (auto& w : bits_) w = ~std::uint64_t{0};
    const std::uint64_t tail = space.total() & 63;
    if (tail != 0) bits_.back() = (std::uint64_t{1} << tail) - 1;
  }
}

SurvivorSet SurvivorSet::single(const ProfileSpace& space, ProfileIndex p) {
  SurvivorSet s(space);
  s.insert(p);
  return s;
}

SurvivorSet SurvivorSet::product(
    const ProfileSpace& space, const std::vector<std::vector<std::size_t>>& sets) {
  SurvivorSet s(space);
  const std::size_t n = space.num_players();
  if (sets.size() != n) fail(ErrorCode::kInvalidArgument, "product arity");
  for (const auto& v : sets) {
    if (v.empty()) return s;
  }
  std::vector<std::size_t> pos(n, 0);
  while (true) {
    ProfileIndex p = 0;
    for (std::size_t i = 0; i < n; ++i) p += sets[i][pos[i]] * space.stride(i);
    s.insert(p);
    std::size_t i = n;
    while (i-- > 0) {
      if (++pos[i] < sets[i].size()) break;
      pos[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return s;
}

std::uint64_t SurvivorSet::count() const {
  std::uint64_t c = 0;
  for (auto w : bits_) c += static_cast<std::uint64_t>(__builtin_popcountll(w));
  return c;
}

bool SurvivorSet::empty() const {
  for (auto w : bits_) {
    if (w != 0) return false;
  }
  return true;
}

std::vector<ProfileIndex> SurvivorSet::members() const {
  std::vector<ProfileIndex> out;
  out.reserve(count());
  for_each([&](ProfileIndex p) { out.push_back(p); });
  return out;
}

SurvivorSet& SurvivorSet::operator&=(const SurvivorSet& o) {
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] &= o.bits_[w];
  return *this;
}

SurvivorSet& SurvivorSet::operator|=(const SurvivorSet& o) {
  for (std::size_t w = 0; w < bits_.size(); ++w) bits_[w] |= o.bits_[w];
  return *this;
}

bool SurvivorSet::subset_of(const SurvivorSet& o) const {
  for (std::size_t w = 0; w < bits_.size(); ++w) {
    if ((bits_[w] & ~o.bits_[w]) != 0) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> SurvivorSet::projections() const {
  const std::size_t n = space_.num_players();
  std::vector<std::vector<char>> seen(n);
  for (std::size_t i = 0; i < n; ++i) seen[i].assign(space_.size(i), 0);
  for_each([&](ProfileIndex p) {
    for (std::size_t i = 0; i < n; ++i) seen[i][space_.coord(p, i)] = 1;
  });
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x = 0; x < seen[i].size(); ++x) {
      if (seen[i][x]) out[i].push_back(x);
    }
  }
  return out;
}

SurvivorSet SurvivorSet::product_hull() const {
  return product(space_, projections());
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorCode::kIo, "sha256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof(buf), "%02x", md[k]);
    hex += buf;
  }
  return hex;
}

std::string SurvivorSet::digest() const {
  std::string data;
  for (std::size_t i = 0; i < space_.num_players(); ++i) {
    data += std::to_string(space_.size(i)) + ",";
  }
  data += ";";
  for (std::uint64_t w : bits_) {
    for (int b = 0; b < 8; ++b) data.push_back(static_cast<char>((w >> (8 * b)) & 0xff));
  }
  return sha256_hex(data);
}

}  // namespace bnlab
