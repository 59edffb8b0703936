#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace dclab {

/// An ordered list of encoding unitaries sharing one dimension.
///
/// `target_lambda0` records the largest Schmidt weight the family was built for,
/// when there is one. Member count is bounded by d² but may be smaller than d so
/// that partial families (prefixes, pairs) can be verified too.
class EncodingFamily {
 public:
  EncodingFamily(std::size_t d, std::vector<UnitaryMatrix> members, std::string label = {},
                 std::optional<double> target_lambda0 = std::nullopt)
      : d_(d), members_(std::move(members)), label_(std::move(label)), target_lambda0_(target_lambda0) {
    if (d_ < 1) throw DimensionError("family dimension must be positive");
    if (members_.empty()) throw std::invalid_argument("family must have at least one member");
    if (members_.size() > d_ * d_) {
      throw std::invalid_argument("family of " + std::to_string(members_.size()) +
                                  " members exceeds d^2 = " + std::to_string(d_ * d_));
    }
    for (const auto& m : members_) {
      if (m.dim() != d_) throw DimensionError("family member dimension differs from family dimension");
    }
  }

  std::size_t dim() const { return d_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<UnitaryMatrix>& members() const { return members_; }
  const UnitaryMatrix& operator[](std::size_t i) const { return members_.at(i); }
  const std::string& label() const { return label_; }
  std::optional<double> target_lambda0() const { return target_lambda0_; }

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  std::size_t d_;
  std::vector<UnitaryMatrix> members_;
  std::string label_;
  std::optional<double> target_lambda0_;
};

}  // namespace dclab
