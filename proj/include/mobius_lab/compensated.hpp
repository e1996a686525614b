#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace mobius_lab {

// Neumaier's variant of Kahan summation. The running value is sum() + residual();
// value() folds the two together.
template <class T>
class CompensatedSum {
public:
    constexpr CompensatedSum() = default;

    void add(T term) {
        if constexpr (std::is_floating_point_v<T>) {
            add_real(sum_, residual_, term);
        } else {
            typename T::value_type re = sum_.real(), im = sum_.imag();
            typename T::value_type cre = residual_.real(), cim = residual_.imag();
            add_real(re, cre, term.real());
            add_real(im, cim, term.imag());
            sum_ = T(re, im);
            residual_ = T(cre, cim);
        }
    }

    // Merges another compensated partial sum, preserving its residual.
    void add(const CompensatedSum& other) {
        add(other.sum_);
        add(other.residual_);
    }

    T sum() const { return sum_; }
    T residual() const { return residual_; }
    T value() const { return sum_ + residual_; }

private:
    template <class R>
    static void add_real(R& sum, R& residual, R term) {
        const R t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            residual += (sum - t) + term;
        } else {
            residual += (term - t) + sum;
        }
        sum = t;
    }

    T sum_{};
    T residual_{};
};

}  // namespace mobius_lab
