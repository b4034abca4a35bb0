#pragma once

#include <cmath>

namespace nhs {

/// Neumaier (improved Kahan-Babuska) summation. Each addition goes through
/// the TwoSum error-free transformation; the lost low-order parts are kept
/// in `compensation` and folded back in when the value is read.
template <typename Value>
class CompensatedSum {
 public:
  CompensatedSum& operator+=(const Value& x) {
    using std::abs;
    const Value t = sum_ + x;
    if (abs(sum_) >= abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  Value value() const { return sum_ + compensation_; }
  Value compensation() const { return compensation_; }

 private:
  Value sum_{0};
  Value compensation_{0};
};

}  // namespace nhs
