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

#ifndef MFRE_CSV_HPP
#define MFRE_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

// CSV emission helpers: RFC-4180 quoting and line endings, UTF-8, '.'
// decimal separator, reals at 17 significant digits so round-trips are
// exact. Files may start with '#' comment lines documenting each column;
// data rows follow RFC-4180.

namespace mfre::csv {

// shortest-17-significant-digits rendering, locale independent
std::string real(double v);

std::string quote_if_needed(const std::string& cell);

class Writer {
 public:
  explicit Writer(std::ostream& os) : os_(os) {}

  void comment(const std::string& text);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
};

}  // namespace mfre::csv

#endif  // MFRE_CSV_HPP
