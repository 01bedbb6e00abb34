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


#ifndef BNLAB_SPEC_IO_HPP_
#define BNLAB_SPEC_IO_HPP_

#include <string>

#include "bnlab/game.hpp"

namespace bnlab {

inline constexpr int kSpecVersion = 1;

// Parses a spec document. Throws Schema on any structural problem, naming
// the offending path.
GameSpec parse_spec(const std::string& text);
// Reads and parses a spec file. Throws Io when the file cannot be read.
GameSpec load_spec(const std::string& path);

// Pretty-printed document; parse_spec(emit_spec(s)) == s.
std::string emit_spec(const GameSpec& spec);
// Compact form with sorted keys.
std::string canonical_spec(const GameSpec& spec);
// sha256 of canonical_spec.
std::string spec_hash(const GameSpec& spec);

// Whole-file read; throws Io.
std::string read_file(const std::string& path);
// Writes to a sibling temporary and renames over path; throws Io.
void write_file_atomic(const std::string& path, const std::string& data);

}  // namespace bnlab

#endif  // BNLAB_SPEC_IO_HPP_
