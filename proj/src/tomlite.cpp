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

#include "mfre/tomlite.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace mfre::tomlite {

namespace {

using nlohmann::json;

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  int line = 1;

  bool done() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }
  char take() {
    const char c = s[pos++];
    if (c == '\n') ++line;
    return c;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw std::runtime_error("toml parse error (line " + std::to_string(line) +
                             "): " + what);
  }
};

void skip_inline_ws(Cursor& c) {
  while (!c.done() && (c.peek() == ' ' || c.peek() == '\t')) c.take();
}

void skip_ws_and_comments(Cursor& c) {
  while (!c.done()) {
    const char ch = c.peek();
    if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
      c.take();
    } else if (ch == '#') {
      while (!c.done() && c.peek() != '\n') c.take();
    } else {
      break;
    }
  }
}

bool is_bare_key_char(char ch) {
  return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '-';
}

std::string parse_basic_string(Cursor& c) {
  if (c.take() != '"') c.fail("expected '\"'");
  std::string out;
  while (true) {
    if (c.done()) c.fail("unterminated string");
    char ch = c.take();
    if (ch == '"') break;
    if (ch == '\\') {
      if (c.done()) c.fail("dangling escape");
      const char esc = c.take();
      switch (esc) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: c.fail(std::string("unsupported escape \\") + esc);
      }
    } else {
      out += ch;
    }
  }
  return out;
}

std::vector<std::string> parse_key_path(Cursor& c) {
  std::vector<std::string> path;
  while (true) {
    skip_inline_ws(c);
    if (c.done()) c.fail("expected key");
    std::string part;
    if (c.peek() == '"') {
      part = parse_basic_string(c);
    } else {
      while (!c.done() && is_bare_key_char(c.peek())) part += c.take();
      if (part.empty()) c.fail("expected key");
    }
    path.push_back(std::move(part));
    skip_inline_ws(c);
    if (!c.done() && c.peek() == '.') {
      c.take();
      continue;
    }
    break;
  }
  return path;
}

json parse_value(Cursor& c);

json parse_array(Cursor& c) {
  if (c.take() != '[') c.fail("expected '['");
  json arr = json::array();
  while (true) {
    skip_ws_and_comments(c);
    if (c.done()) c.fail("unterminated array");
    if (c.peek() == ']') {
      c.take();
      break;
    }
    arr.push_back(parse_value(c));
    skip_ws_and_comments(c);
    if (c.done()) c.fail("unterminated array");
    if (c.peek() == ',') {
      c.take();
      continue;
    }
    if (c.peek() == ']') {
      c.take();
      break;
    }
    c.fail("expected ',' or ']' in array");
  }
  return arr;
}

json parse_value(Cursor& c) {
  skip_inline_ws(c);
  if (c.done()) c.fail("expected value");
  const char ch = c.peek();
  if (ch == '"') return json(parse_basic_string(c));
  if (ch == '[') return parse_array(c);
  // bare scalar: bool, integer, or float
  std::string tok;
  while (!c.done()) {
    const char t = c.peek();
    if (t == '\n' || t == '\r' || t == ',' || t == ']' || t == '#' || t == ' ' ||
        t == '\t')
      break;
    tok += c.take();
  }
  if (tok.empty()) c.fail("expected value");
  if (tok == "true") return json(true);
  if (tok == "false") return json(false);
  const bool looks_float = tok.find_first_of(".eE") != std::string::npos &&
                           tok.find_first_of("0123456789") != std::string::npos;
  try {
    std::size_t used = 0;
    if (looks_float || tok == "inf" || tok == "-inf" || tok == "nan") {
      const double v = std::stod(tok, &used);
      if (used != tok.size()) c.fail("trailing characters in number: " + tok);
      return json(v);
    }
    const long long v = std::stoll(tok, &used);
    if (used != tok.size()) {
      const double f = std::stod(tok, &used);
      if (used != tok.size()) c.fail("bad scalar: " + tok);
      return json(f);
    }
    return json(v);
  } catch (const std::exception&) {
    c.fail("bad scalar: " + tok);
  }
}

json* descend(json& root, const std::vector<std::string>& path, Cursor& c) {
  json* node = &root;
  for (const auto& part : path) {
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) c.fail("key path collides with a non-table value");
    node = &(*node)[part];
  }
  return node;
}

}  // namespace

json parse(const std::string& text) {
  json root = json::object();
  Cursor c{text};
  std::vector<std::string> table_path;
  while (true) {
    skip_ws_and_comments(c);
    if (c.done()) break;
    if (c.peek() == '[') {
      c.take();
      table_path = parse_key_path(c);
      skip_inline_ws(c);
      if (c.done() || c.take() != ']') c.fail("expected ']' after table header");
      json* node = descend(root, table_path, c);
      if (node->is_null()) *node = json::object();
      continue;
    }
    std::vector<std::string> key = parse_key_path(c);
    skip_inline_ws(c);
    if (c.done() || c.take() != '=') c.fail("expected '=' after key");
    json value = parse_value(c);
    std::vector<std::string> full = table_path;
    full.insert(full.end(), key.begin(), key.end());
    json* node = descend(root, full, c);
    if (!node->is_null()) c.fail("duplicate key: " + key.back());
    *node = std::move(value);
  }
  return root;
}

}  // namespace mfre::tomlite
