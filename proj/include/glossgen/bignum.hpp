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
//
// \file
// Minimal unsigned big integer: just enough for iterated products of machine
// words and decimal printing. Limbs are base 1e9, least significant first.

#ifndef GLOSSGEN_BIGNUM_HPP_
#define GLOSSGEN_BIGNUM_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace glossgen {

class BigUint {
 public:
  explicit BigUint(std::uint64_t value = 0) {
    while (value > 0) {
      limbs_.push_back(static_cast<std::uint32_t>(value % kBase));
      value /= kBase;
    }
  }

  void mul(std::uint64_t factor) {
    if (factor == 0) {
      limbs_.clear();
      return;
    }
    if (limbs_.empty()) return;
    std::uint64_t carry = 0;
    for (std::uint32_t& limb : limbs_) {
      const std::uint64_t prod = static_cast<std::uint64_t>(limb) * factor + carry;
      limb = static_cast<std::uint32_t>(prod % kBase);
      carry = prod / kBase;
    }
    while (carry > 0) {
      limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
      carry /= kBase;
    }
  }

  bool is_zero() const { return limbs_.empty(); }

  // -1, 0, +1 against a machine word.
  int compare(std::uint64_t value) const {
    const BigUint other(value);
    if (limbs_.size() != other.limbs_.size()) {
      return limbs_.size() < other.limbs_.size() ? -1 : 1;
    }
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      if (limbs_[i] != other.limbs_[i]) {
        return limbs_[i] < other.limbs_[i] ? -1 : 1;
      }
    }
    return 0;
  }

  std::string to_string() const {
    if (limbs_.empty()) return "0";
    std::string out = std::to_string(limbs_.back());
    for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
      std::string part = std::to_string(limbs_[i]);
      out += std::string(9 - part.size(), '0') + part;
    }
    return out;
  }

  std::size_t digit_count() const { return to_string().size(); }

 private:
  static constexpr std::uint64_t kBase = 1000000000ULL;
  std::vector<std::uint32_t> limbs_;
};

}  // namespace glossgen

#endif  // GLOSSGEN_BIGNUM_HPP_
