#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "flagtune/digest.hpp"

namespace flagtune {

enum class Status { ok, compile_error, run_error, timeout };

std::string_view to_string(Status status) noexcept;
/// Throws ParseError.
Status parse_status(std::string_view text);

/// One evaluated (configuration, benchmark) pair.
/// `time` is present iff status is ok; `digest` is present iff compilation succeeded.
struct Measurement {
  Status status = Status::ok;
  std::optional<double> time;
  std::optional<Digest> digest;
  bool cached = false;

  bool ok() const noexcept { return status == Status::ok; }

  static Measurement success(double seconds, Digest digest) {
    return {Status::ok, seconds, std::move(digest), false};
  }
  static Measurement failure(Status status, std::optional<Digest> digest = std::nullopt) {
    return {status, std::nullopt, std::move(digest), false};
  }

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

}  // namespace flagtune
