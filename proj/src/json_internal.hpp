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


#ifndef BNLAB_JSON_INTERNAL_HPP_
#define BNLAB_JSON_INTERNAL_HPP_

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnlab/errors.hpp"
#include "bnlab/game.hpp"

namespace bnlab::detail {

using Json = nlohmann::json;

// Read-only view of a JSON node that reports schema errors by path.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const Json& raw() const { return *j_; }

  bool has(const char* key) const { return j_->is_object() && j_->contains(key); }
  Node at(const char* key) const {
    object();
    if (!j_->contains(key)) fail(ErrorCode::kSchema, path_ + ": missing key '" + key + "'");
    return Node((*j_)[key], path_ + "." + key);
  }
  Node at(std::size_t k) const { return Node((*j_)[k], path_ + "[" + std::to_string(k) + "]"); }

  void object() const {
    if (!j_->is_object()) fail(ErrorCode::kSchema, path_ + ": expected an object");
  }
  // Rejects keys outside the allowed list.
  void only(std::initializer_list<const char*> keys) const {
    object();
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      bool ok = false;
      for (const char* k : keys) ok = ok || it.key() == k;
      if (!ok) fail(ErrorCode::kSchema, path_ + ": unknown key '" + it.key() + "'");
    }
  }
  std::size_t size() const {
    if (!j_->is_array()) fail(ErrorCode::kSchema, path_ + ": expected an array");
    return j_->size();
  }
  double number() const {
    if (!j_->is_number()) fail(ErrorCode::kSchema, path_ + ": expected a number");
    return j_->get<double>();
  }
  std::int64_t integer() const {
    if (!j_->is_number_integer()) fail(ErrorCode::kSchema, path_ + ": expected an integer");
    return j_->get<std::int64_t>();
  }
  std::uint64_t unsigned_integer() const {
    if (!j_->is_number_unsigned() && !(j_->is_number_integer() && j_->get<std::int64_t>() >= 0)) {
      fail(ErrorCode::kSchema, path_ + ": expected a non-negative integer");
    }
    return j_->get<std::uint64_t>();
  }
  int int32() const {
    const std::int64_t v = integer();
    if (v < INT32_MIN || v > INT32_MAX) fail(ErrorCode::kSchema, path_ + ": integer out of range");
    return static_cast<int>(v);
  }
  bool boolean() const {
    if (!j_->is_boolean()) fail(ErrorCode::kSchema, path_ + ": expected a boolean");
    return j_->get<bool>();
  }
  std::string str() const {
    if (!j_->is_string()) fail(ErrorCode::kSchema, path_ + ": expected a string");
    return j_->get<std::string>();
  }
  std::vector<double> numbers() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = at(k).number();
    return v;
  }
  std::vector<std::vector<double>> matrix() const {
    std::vector<std::vector<double>> v(size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = at(k).numbers();
    return v;
  }

 private:
  const Json* j_;
  std::string path_;
};

Json spec_to_json(const GameSpec& spec);
GameSpec spec_from_json(const Json& j);
// Parses text as JSON; syntax errors become Schema errors.
Json parse_json(const std::string& text, const std::string& what);

}  // namespace bnlab::detail

#endif  // BNLAB_JSON_INTERNAL_HPP_
