#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace flagtune {

struct Digest {
  std::string algorithm;  // OpenSSL digest name, "md5" by default
  std::string hex;

  friend bool operator==(const Digest&, const Digest&) = default;
};

inline constexpr std::string_view kDefaultDigest = "md5";

/// Throws Error for an unknown algorithm name.
Digest digest_bytes(std::string_view algorithm, std::string_view data);
Digest digest_file(std::string_view algorithm, const std::filesystem::path& path);

}  // namespace flagtune
