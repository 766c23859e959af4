#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptrl {

// Credential pairs are abstracted as small integer ids. Valid ids are 1..9.
class CredentialId {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 9;

  explicit CredentialId(int value) : value_(value) {
    if (value < kMin || value > kMax) {
      throw std::out_of_range("credential id must be in 1..9, got " +
                              std::to_string(value));
    }
  }

  int value() const { return value_; }

  bool operator==(const CredentialId&) const = default;

 private:
  int value_;
};

// An unordered set of credential ids, stored as a 9-bit mask. The textual
// encoding concatenates member digits in ascending order, so "12" and "21"
// both parse to the same set. The empty set encodes as the empty string.
class CredentialSet {
 public:
  CredentialSet() = default;

  static CredentialSet from_string(const std::string& digits) {
    CredentialSet s;
    for (char c : digits) {
      if (c < '1' || c > '9') {
        throw std::invalid_argument("credential set digit out of 1..9: '" +
                                    std::string(1, c) + "'");
      }
      s.insert(CredentialId(c - '0'));
    }
    return s;
  }

  void insert(CredentialId id) { bits_ |= mask(id.value()); }
  bool contains(CredentialId id) const { return bits_ & mask(id.value()); }
  bool empty() const { return bits_ == 0; }

  int size() const {
    int n = 0;
    for (int id = CredentialId::kMin; id <= CredentialId::kMax; ++id) {
      if (bits_ & mask(id)) ++n;
    }
    return n;
  }

  CredentialSet& merge(const CredentialSet& other) {
    bits_ |= other.bits_;
    return *this;
  }

  std::vector<int> values() const {
    std::vector<int> out;
    for (int id = CredentialId::kMin; id <= CredentialId::kMax; ++id) {
      if (bits_ & mask(id)) out.push_back(id);
    }
    return out;
  }

  std::string to_string() const {
    std::string out;
    for (int id : values()) out.push_back(static_cast<char>('0' + id));
    return out;
  }

  bool operator==(const CredentialSet&) const = default;

 private:
  static std::uint16_t mask(int id) {
    return static_cast<std::uint16_t>(1u << id);
  }

  std::uint16_t bits_ = 0;
};

}  // namespace ptrl
