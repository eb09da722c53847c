// Copyright 2026 The AltGDmin Authors.
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

#include "altgdmin/exact_sum.h"

#include <bit>
#include <cmath>
#include <limits>

namespace altgdmin {

namespace {

constexpr int kExponentBias = 1074;  // digit bit 0 has weight 2^-1074

}  // namespace

ExactSum::ExactSum() { digits_.fill(0); }

void ExactSum::add(double x) {
  if (!std::isfinite(x)) {
    special_ += x;
    has_special_ = true;
    return;
  }
  if (x == 0.0) return;
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const auto biased = static_cast<int>((bits >> 52) & 0x7ff);
  std::uint64_t mantissa = bits & ((std::uint64_t{1} << 52) - 1);
  int position = 0;
  if (biased != 0) {
    mantissa |= std::uint64_t{1} << 52;
    position = biased - 1;
  }
  const int index = position >> 5;
  const unsigned __int128 shifted = static_cast<unsigned __int128>(mantissa)
                                    << (position & 31);
  const auto d0 = static_cast<std::int64_t>(shifted & 0xffffffffu);
  const auto d1 = static_cast<std::int64_t>((shifted >> 32) & 0xffffffffu);
  const auto d2 = static_cast<std::int64_t>(shifted >> 64);
  if (bits >> 63) {
    digits_[index] -= d0;
    digits_[index + 1] -= d1;
    digits_[index + 2] -= d2;
  } else {
    digits_[index] += d0;
    digits_[index + 1] += d1;
    digits_[index + 2] += d2;
  }
  if (index < low_) low_ = index;
  if (index + 2 > high_) high_ = index + 2;
  if (++pending_ >= kPendingLimit) normalize();
}

void ExactSum::merge(const ExactSum& other) {
  if (other.has_special_) {
    special_ += other.special_;
    has_special_ = true;
  }
  if (other.high_ < 0) return;
  other.normalize();
  for (int i = other.low_; i <= other.high_; ++i) digits_[i] += other.digits_[i];
  if (other.low_ < low_) low_ = other.low_;
  if (other.high_ > high_) high_ = other.high_;
  if (++pending_ >= kPendingLimit) normalize();
}

void ExactSum::normalize() const {
  if (high_ < 0) return;
  int top = -1;
  for (int i = low_; i < kDigits - 1; ++i) {
    const std::int64_t carry = digits_[i] >> 32;
    digits_[i] -= carry * (std::int64_t{1} << 32);
    digits_[i + 1] += carry;
    if (digits_[i] != 0) top = i;
    if (i >= high_ && carry == 0) break;
  }
  for (int i = kDigits - 1; i > top; --i) {
    if (digits_[i] != 0) {
      top = i;
      break;
    }
  }
  while (low_ < kDigits && digits_[low_] == 0 && low_ < top) ++low_;
  high_ = top;
  if (top < 0) low_ = kDigits;
  pending_ = 0;
}

bool ExactSum::is_zero() const {
  normalize();
  return high_ < 0 && !has_special_;
}

double ExactSum::value() const {
  normalize();
  double finite = 0.0;
  if (high_ >= 0) {
    // After normalization every digit except the topmost lies in [0, 2^32);
    // the sign of the sum is the sign of the top digit.
    std::array<std::int64_t, kDigits> mag = digits_;
    const bool negative = mag[high_] < 0;
    if (negative) {
      for (int i = low_; i <= high_; ++i) mag[i] = -mag[i];
      for (int i = low_; i < high_; ++i) {
        const std::int64_t carry = mag[i] >> 32;
        mag[i] -= carry * (std::int64_t{1} << 32);
        mag[i + 1] += carry;
      }
    }
    int top = high_;
    while (top >= 0 && mag[top] == 0) --top;
    if (top >= 0) {
      auto bit = [&](int pos) -> std::uint64_t {
        int j = pos >> 5;
        if (j > top) j = top;
        const int shift = pos - 32 * j;
        if (shift >= 63) return 0;
        return (static_cast<std::uint64_t>(mag[j]) >> shift) & 1u;
      };
      const auto top_value = static_cast<std::uint64_t>(mag[top]);
      const int msb = 32 * top + (63 - std::countl_zero(top_value));
      int lo = msb - 52;
      if (lo < 0) lo = 0;
      std::uint64_t mantissa = 0;
      for (int pos = msb; pos >= lo; --pos) mantissa = (mantissa << 1) | bit(pos);
      if (lo > 0) {
        const std::uint64_t round_bit = bit(lo - 1);
        bool sticky = false;
        const int below = lo - 1;  // bits strictly below this position
        const int full_digits = below >> 5;
        for (int j = low_; j < full_digits && !sticky; ++j) sticky = mag[j] != 0;
        if (!sticky && (below & 31) != 0 && full_digits <= top) {
          const auto partial = static_cast<std::uint64_t>(mag[full_digits]);
          sticky = (partial & ((std::uint64_t{1} << (below & 31)) - 1)) != 0;
        }
        if (round_bit && (sticky || (mantissa & 1u))) {
          ++mantissa;
          if (mantissa == (std::uint64_t{1} << 53)) {
            mantissa >>= 1;
            ++lo;
          }
        }
      }
      finite = std::ldexp(static_cast<double>(mantissa), lo - kExponentBias);
      if (negative) finite = -finite;
    }
  }
  if (has_special_) return special_ + finite;
  return finite;
}

void ExactSumMatrix::merge(const ExactSumMatrix& other) {
  for (size_t i = 0; i < cells_.size(); ++i) cells_[i].merge(other.cells_[i]);
}

}  // namespace altgdmin
