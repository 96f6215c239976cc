// xvalign/text_io.h

// Copyright 2026  The xvalign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// Small helpers shared by the plain-text file formats.

#ifndef XVALIGN_TEXT_IO_H_
#define XVALIGN_TEXT_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace xvalign {

/// Walks a text buffer line by line, skipping blank lines and lines whose
/// first non-space character is '#'. line() is the 1-based physical line of
/// the last line returned (or the last line read, at end of input).
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  /// Splits the next content line on whitespace. False at end of input.
  bool next(std::vector<std::string_view> &tokens);
  /// Next content line, verbatim (trailing CR stripped).
  bool next_line(std::string_view &line);
  int line() const { return line_; }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 0;
};

std::vector<std::string_view> split_whitespace(std::string_view s);
std::string_view trim(std::string_view s);

long parse_integer(std::string_view token, const std::string &source,
                   int line);
double parse_real(std::string_view token, const std::string &source, int line);

/// 17 significant digits: round-trips every finite double.
std::string format_real(double v);

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path,
                     const std::string &contents);

}  // namespace xvalign

#endif  // XVALIGN_TEXT_IO_H_
