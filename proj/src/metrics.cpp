#include "polar/metrics.hpp"

#include "polar/types.hpp"

namespace polar {

std::vector<int> apply_threshold(std::span<const double> probs, double t) {
    if (t < 0.0 || t > 1.0) {
        throw ValidationError("threshold must lie in [0,1]");
    }
    std::vector<int> out;
    out.reserve(probs.size());
    for (double p : probs) {
        out.push_back(p >= t ? 1 : 0);
    }
    return out;
}

namespace {

ClassScore score_from_counts(long tp, long fp, long fn) {
    ClassScore s;
    s.precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    s.recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
    s.f1 = (s.precision + s.recall) > 0.0
               ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
               : 0.0;
    return s;
}

}  // namespace

EvaluationResult macro_f1(std::span<const int> truth, std::span<const int> pred) {
    if (truth.size() != pred.size()) {
        throw ValidationError("macro_f1: truth and pred lengths differ (" +
                              std::to_string(truth.size()) + " vs " +
                              std::to_string(pred.size()) + ")");
    }
    if (truth.empty()) {
        throw ValidationError("macro_f1: empty input");
    }

    ConfusionCounts c;
    for (size_t i = 0; i < truth.size(); ++i) {
        const int t = truth[i];
        const int p = pred[i];
        if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
            throw ValidationError("macro_f1: labels must be 0 or 1");
        }
        if (t == 1 && p == 1) ++c.tp;
        else if (t == 0 && p == 1) ++c.fp;
        else if (t == 1 && p == 0) ++c.fn;
        else ++c.tn;
    }

    EvaluationResult r;
    r.counts = c;
    r.class1 = score_from_counts(c.tp, c.fp, c.fn);
    // Class 0 as positive: tn plays tp, fn plays fp (predicted 0, truth 1).
    r.class0 = score_from_counts(c.tn, c.fn, c.fp);
    r.macro_f1 = (r.class0.f1 + r.class1.f1) / 2.0;
    return r;
}

}  // namespace polar
