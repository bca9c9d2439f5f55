/** Copyright 2026 The offnet Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * 	http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace offnet::csv {

/// One physical CSV record. `line` is the 1-based line on which the record
/// starts; quoted fields may span several lines.
struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
  bool unterminated_quote = false;
};

/// RFC 4180 reader: comma separated, double-quote quoting with "" escapes,
/// LF or CRLF line endings. A leading UTF-8 byte-order mark is skipped.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record; returns false at end of input.
  bool next(Record& record);

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  bool started_ = false;
};

/// Replaces every invalid UTF-8 sequence with U+FFFD. Returns the number of
/// replacements made.
std::size_t repair_utf8(std::string& text);

/// Quotes a field if it contains a separator, quote or line break.
std::string escape(std::string_view field);

/// Joins already-formatted cells into one CSV line (no trailing newline).
std::string join(const std::vector<std::string>& cells);

}  // namespace offnet::csv
