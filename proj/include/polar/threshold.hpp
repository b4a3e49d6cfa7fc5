#pragma once

#include <span>
#include <utility>
#include <vector>

namespace polar {

struct ThresholdGrid {
    std::vector<double> values;

    static ThresholdGrid defaults();  // 0.30, 0.35, ..., 0.70

    /// Throws ConfigError unless strictly ascending with all values in [0,1].
    void validate() const;
};

struct ThresholdChoice {
    double threshold = 0.5;
    double dev_f1 = 0.0;
    std::vector<std::pair<double, double>> f1_by_threshold;  // grid order
};

/// Evaluates macro-F1 at every grid threshold and returns the argmax.
/// Ties go to the threshold closest to 0.5, then to the smaller one.
ThresholdChoice tune_threshold(std::span<const int> truth,
                               std::span<const double> probs,
                               const ThresholdGrid& grid);

/// Comparison key used for the tie rules: |x| rounded at 1e-9 so that
/// decimal grid values compare as written, not as binary approximations.
long long tie_key(double x);

}  // namespace polar
