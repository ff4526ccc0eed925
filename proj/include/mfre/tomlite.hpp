// Copyright 2026 the mfre authors
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

#ifndef MFRE_TOMLITE_HPP
#define MFRE_TOMLITE_HPP

#include <string>

#include "json.hpp"

// Minimal TOML subset reader, enough for the model and experiment schemas:
// [table] and [dotted.table] headers, dotted keys, basic "..." strings,
// integers, floats, booleans, and (nested) inline arrays. Comments with #.
// Not supported: arrays of tables, multiline strings, datetimes, inline
// tables. Parsed into the same JSON document the JSON path produces, so the
// schema layer does not care which format a file used.

namespace mfre::tomlite {

nlohmann::json parse(const std::string& text);

}  // namespace mfre::tomlite

#endif  // MFRE_TOMLITE_HPP
