// Copyright 2026 The rel-toa Authors
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

#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace reltoa::io {

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& bytes);

/// Collects the artifacts of one run in an output directory. Each file is
/// written to a temporary name and renamed into place. discard() removes
/// everything written so far; the destructor does the same unless commit()
/// was called.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path directory);
  ~OutputSet();
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  const std::filesystem::path& directory() const noexcept { return directory_; }

  /// Writes `name` from whatever `fill` streams into it.
  void write(const std::string& name, const std::function<void(std::ostream&)>& fill);
  void write_text(const std::string& name, const std::string& text);

  const std::vector<std::string>& files() const noexcept { return files_; }

  /// Writes manifest.txt ("<sha256>  <name>" per file) and keeps the outputs.
  void commit(const std::string& manifest_name = "manifest.txt");
  void discard() noexcept;

 private:
  std::filesystem::path directory_;
  std::vector<std::string> files_;
  std::vector<std::string> digests_;
  bool committed_ = false;
};

}  // namespace reltoa::io
