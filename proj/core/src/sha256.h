// Copyright 2026 The tagprobe Authors.
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

#ifndef TAGPROBE_SRC_SHA256_H_
#define TAGPROBE_SRC_SHA256_H_

#include <openssl/evp.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "tagprobe/errors.h"
#include "tagprobe/nn/parameters.h"

namespace tagprobe {

// Incremental SHA-256. Strings are hashed with a terminating NUL so that
// consecutive fields cannot run together.
class Sha256 {
 public:
  Sha256() : context_(EVP_MD_CTX_new()) {
    if (!context_ || EVP_DigestInit_ex(context_, EVP_sha256(), nullptr) != 1) {
      throw Error("cannot initialise SHA-256");
    }
  }
  ~Sha256() { EVP_MD_CTX_free(context_); }
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void Update(const void* data, std::size_t size) {
    EVP_DigestUpdate(context_, data, size);
  }
  void Update(std::string_view text) {
    Update(text.data(), text.size());
    Update("\0", 1);
  }
  void Update(std::int64_t value) { Update(&value, sizeof(value)); }
  void Update(const nn::ParameterGroup& group) {
    Update(group.name);
    for (const nn::Parameter& p : group.parameters) {
      Update(p.name);
      Update(static_cast<std::int64_t>(p.value.rows()));
      Update(static_cast<std::int64_t>(p.value.cols()));
      Update(p.value.data(), sizeof(double) * p.value.size());
    }
  }

  std::string HexDigest() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_DigestFinal_ex(context_, digest, &length);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < length; ++i) {
      hex += kHex[digest[i] >> 4];
      hex += kHex[digest[i] & 15];
    }
    return hex;
  }

 private:
  EVP_MD_CTX* context_;
};

inline std::string Sha256Hex(std::string_view bytes) {
  Sha256 hash;
  hash.Update(bytes.data(), bytes.size());
  return hash.HexDigest();
}

}  // namespace tagprobe

#endif  // TAGPROBE_SRC_SHA256_H_
