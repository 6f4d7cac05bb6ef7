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

#include "reltoa/io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include <openssl/evp.h>

#include "reltoa/errors.hpp"

namespace reltoa::io {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

OutputSet::OutputSet(std::filesystem::path directory) : directory_(std::move(directory)) {
  std::filesystem::create_directories(directory_);
}

OutputSet::~OutputSet() {
  if (!committed_) discard();
}

void OutputSet::write(const std::string& name, const std::function<void(std::ostream&)>& fill) {
  std::ostringstream buffer;
  buffer.imbue(std::locale::classic());
  fill(buffer);
  const std::string bytes = buffer.str();

  const auto target = directory_ / name;
  const auto temp = directory_ / (name + ".tmp-" + std::to_string(::getpid()));
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + temp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + temp.string());
  }
  std::filesystem::rename(temp, target);
  for (std::size_t i = 0; i < files_.size(); ++i) {
    if (files_[i] == name) {
      digests_[i] = sha256_hex(bytes);
      return;
    }
  }
  files_.push_back(name);
  digests_.push_back(sha256_hex(bytes));
}

void OutputSet::write_text(const std::string& name, const std::string& text) {
  write(name, [&](std::ostream& out) { out << text; });
}

void OutputSet::commit(const std::string& manifest_name) {
  std::ostringstream manifest;
  for (std::size_t i = 0; i < files_.size(); ++i) manifest << digests_[i] << "  " << files_[i] << '\n';
  write_text(manifest_name, manifest.str());
  committed_ = true;
}

void OutputSet::discard() noexcept {
  for (const std::string& name : files_) {
    std::error_code ec;
    std::filesystem::remove(directory_ / name, ec);
  }
  files_.clear();
  digests_.clear();
}

}  // namespace reltoa::io
