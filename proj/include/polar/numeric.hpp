#pragma once

#include <cmath>

namespace polar {

/// floor for products of decimal fractions and integer counts. Plain
/// std::floor turns 0.29 * 100 into 28 because the product lands at
/// 28.999999999999996; the 1e-9 slack restores the decimal intent and
/// is far below any meaningful fractional part at corpus scale.
inline long floor_share(double x) {
    return static_cast<long>(std::floor(x + 1e-9));
}

}  // namespace polar
