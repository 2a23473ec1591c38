#pragma once

#include <cmath>

namespace sphdesign {

/// Neumaier's variant of Kahan summation. Unlike plain Kahan it stays exact
/// when an addend is larger in magnitude than the running sum, which is the
/// common case when a large diagonal term is cancelled by many small ones.
template <typename T>
class BasicCompensatedSum {
public:
    BasicCompensatedSum() = default;
    explicit BasicCompensatedSum(T init) : sum_(init) {}

    void add(T v) noexcept {
        const T t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    BasicCompensatedSum& operator+=(T v) noexcept {
        add(v);
        return *this;
    }

    BasicCompensatedSum& operator+=(const BasicCompensatedSum& other) noexcept {
        add(other.sum_);
        add(other.comp_);
        return *this;
    }

    T value() const noexcept { return sum_ + comp_; }

private:
    T sum_ = 0;
    T comp_ = 0;
};

using CompensatedSum = BasicCompensatedSum<double>;

}  // namespace sphdesign
