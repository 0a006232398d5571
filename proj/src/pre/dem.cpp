// Copyright 2026 The ehrshare Authors
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

#include "ehrshare/pre/dem.hpp"

#include <openssl/evp.h>

#include <climits>
#include <memory>
#include <string>

#include "ehrshare/common/error.hpp"

namespace ehrshare::pre {
namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const noexcept { EVP_CIPHER_CTX_free(c); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

CipherCtx new_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::bad_alloc();
  return ctx;
}

// EVP takes int lengths; feed large buffers in pieces.
constexpr std::size_t kChunk = std::size_t{1} << 30;

}  // namespace

Ciphertext dem_encrypt(const SymmetricKey& key,
                       ByteView plaintext,
                       const Capsule& capsule,
                       EntropySource& entropy,
                       std::size_t max_plaintext) {
  if (plaintext.size() > max_plaintext) {
    throw Error(Errc::size, "plaintext of " + std::to_string(plaintext.size()) +
                                " bytes exceeds limit of " + std::to_string(max_plaintext));
  }
  Ciphertext out;
  const auto ad = capsule.to_bytes();
  out.associated_data.assign(ad.begin(), ad.end());
  entropy.fill(out.nonce);
  out.body.resize(plaintext.size() + kTagSize);

  auto ctx = new_ctx();
  int len = 0;
  bool ok = EVP_EncryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr, key.bytes().data(),
                               out.nonce.data()) == 1 &&
            EVP_EncryptUpdate(ctx.get(), nullptr, &len, out.associated_data.data(),
                              static_cast<int>(out.associated_data.size())) == 1;
  std::size_t written = 0;
  for (std::size_t off = 0; ok && off < plaintext.size(); off += kChunk) {
    const std::size_t n = std::min(kChunk, plaintext.size() - off);
    ok = EVP_EncryptUpdate(ctx.get(), out.body.data() + written, &len, plaintext.data() + off,
                           static_cast<int>(n)) == 1;
    written += static_cast<std::size_t>(len);
  }
  ok = ok && EVP_EncryptFinal_ex(ctx.get(), out.body.data() + written, &len) == 1;
  written += static_cast<std::size_t>(len);
  ok = ok && EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_GET_TAG, static_cast<int>(kTagSize),
                                 out.body.data() + written) == 1;
  if (!ok || written != plaintext.size()) throw Error(Errc::internal, "AEAD seal failed");
  return out;
}

Bytes dem_decrypt(const SymmetricKey& key, const Ciphertext& ciphertext) {
  if (ciphertext.body.size() < kTagSize) throw Error(Errc::decryption, "ciphertext too short");
  const std::size_t n = ciphertext.body.size() - kTagSize;
  Bytes plain(n);

  auto ctx = new_ctx();
  int len = 0;
  bool ok = EVP_DecryptInit_ex(ctx.get(), EVP_chacha20_poly1305(), nullptr, key.bytes().data(),
                               ciphertext.nonce.data()) == 1 &&
            EVP_DecryptUpdate(ctx.get(), nullptr, &len, ciphertext.associated_data.data(),
                              static_cast<int>(ciphertext.associated_data.size())) == 1;
  std::size_t written = 0;
  for (std::size_t off = 0; ok && off < n; off += kChunk) {
    const std::size_t m = std::min(kChunk, n - off);
    ok = EVP_DecryptUpdate(ctx.get(), plain.data() + written, &len,
                           ciphertext.body.data() + off, static_cast<int>(m)) == 1;
    written += static_cast<std::size_t>(len);
  }
  Bytes tag(ciphertext.body.end() - kTagSize, ciphertext.body.end());
  ok = ok && EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_AEAD_SET_TAG, static_cast<int>(kTagSize),
                                 tag.data()) == 1;
  ok = ok && EVP_DecryptFinal_ex(ctx.get(), plain.data() + written, &len) == 1;
  if (!ok) {
    OPENSSL_cleanse(plain.data(), plain.size());
    throw Error(Errc::decryption, "authentication failed");
  }
  return plain;
}

}  // namespace ehrshare::pre
