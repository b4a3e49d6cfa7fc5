#pragma once

#include <optional>
#include <span>
#include <vector>

namespace polar {

struct ConfusionCounts {
    long tp = 0;  // class 1 = positive
    long fp = 0;
    long fn = 0;
    long tn = 0;

    long total() const { return tp + fp + fn + tn; }
};

struct ClassScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvaluationResult {
    double macro_f1 = 0.0;  // unweighted mean of the two per-class F1 values
    ClassScore class0;
    ClassScore class1;
    ConfusionCounts counts;
    std::optional<double> threshold_used;
};

/// Decision rule is inclusive: prediction is 1 iff prob >= t.
std::vector<int> apply_threshold(std::span<const double> probs, double t);

/// Macro-averaged F1 over the fixed class set {0,1}. Zero-denominator
/// precision/recall/F1 are defined as 0, and both classes always
/// contribute to the mean even when absent from the truth.
EvaluationResult macro_f1(std::span<const int> truth, std::span<const int> pred);

}  // namespace polar
