#include "flagtune/digest.hpp"

#include <array>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "flagtune/error.hpp"

namespace flagtune {

namespace {

struct CtxDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

class Hasher {
 public:
  explicit Hasher(std::string_view algorithm) : algorithm_(algorithm) {
    md_ = EVP_get_digestbyname(algorithm_.c_str());
    if (md_ == nullptr) throw Error("unknown digest algorithm '" + algorithm_ + "'");
    ctx_.reset(EVP_MD_CTX_new());
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), md_, nullptr) != 1)
      throw Error("digest init failed");
  }

  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx_.get(), data, n) != 1) throw Error("digest update failed");
  }

  Digest finish() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> raw{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), raw.data(), &len) != 1) throw Error("digest final failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
      hex.push_back(kHex[raw[i] >> 4]);
      hex.push_back(kHex[raw[i] & 0xf]);
    }
    return {algorithm_, std::move(hex)};
  }

 private:
  std::string algorithm_;
  const EVP_MD* md_ = nullptr;
  CtxPtr ctx_;
};

}  // namespace

Digest digest_bytes(std::string_view algorithm, std::string_view data) {
  Hasher h(algorithm);
  h.update(data.data(), data.size());
  return h.finish();
}

Digest digest_file(std::string_view algorithm, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  Hasher h(algorithm);
  std::array<char, 1 << 15> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (auto n = in.gcount(); n > 0) h.update(buf.data(), static_cast<std::size_t>(n));
  }
  return h.finish();
}

}  // namespace flagtune
