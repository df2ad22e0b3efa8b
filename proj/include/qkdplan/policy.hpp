#pragma once

#include <cmath>
#include <cstdint>

#include "qkdplan/errors.hpp"

namespace qkdplan {

// Rekeying policy of one data channel: the symmetric key length and how often
// the key is replaced. A refresh rate of zero means the channel never rekeys.
class KeyPolicy {
 public:
  KeyPolicy(std::int64_t key_length_bits, double refresh_rate_hz)
      : key_length_bits_(key_length_bits), refresh_rate_hz_(refresh_rate_hz) {
    if (key_length_bits < 1) {
      throw ValidationError("key_length_bits must be >= 1");
    }
    if (!(refresh_rate_hz >= 0.0) || !std::isfinite(refresh_rate_hz)) {
      throw ValidationError("refresh_rate_hz must be finite and >= 0");
    }
  }

  std::int64_t key_length_bits() const { return key_length_bits_; }
  double refresh_rate_hz() const { return refresh_rate_hz_; }

  friend bool operator==(const KeyPolicy&, const KeyPolicy&) = default;

 private:
  std::int64_t key_length_bits_;
  double refresh_rate_hz_;
};

}  // namespace qkdplan
