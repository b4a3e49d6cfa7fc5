#include "polar/threshold.hpp"

#include <cmath>

#include "polar/metrics.hpp"
#include "polar/types.hpp"

namespace polar {

ThresholdGrid ThresholdGrid::defaults() {
    ThresholdGrid g;
    for (int i = 30; i <= 70; i += 5) {
        g.values.push_back(i / 100.0);
    }
    return g;
}

void ThresholdGrid::validate() const {
    if (values.empty()) {
        throw ConfigError("threshold grid must not be empty");
    }
    for (size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0 || values[i] > 1.0) {
            throw ConfigError("threshold grid values must lie in [0,1]");
        }
        if (i > 0 && values[i] <= values[i - 1]) {
            throw ConfigError("threshold grid must be strictly ascending");
        }
    }
}

long long tie_key(double x) {
    return std::llround(std::abs(x) * 1e9);
}

ThresholdChoice tune_threshold(std::span<const int> truth, std::span<const double> probs,
                               const ThresholdGrid& grid) {
    grid.validate();
    if (truth.size() != probs.size() || truth.empty()) {
        throw ValidationError("tune_threshold: inputs must be aligned and non-empty");
    }

    ThresholdChoice choice;
    bool have_best = false;
    for (double t : grid.values) {
        const auto pred = apply_threshold(probs, t);
        const double f1 = macro_f1(truth, pred).macro_f1;
        choice.f1_by_threshold.emplace_back(t, f1);

        // Ties: closest to 0.5 first, then the smaller threshold. The grid
        // ascends, so an equal tie_key seen later means a larger t: skip.
        bool better = false;
        if (!have_best || f1 > choice.dev_f1) {
            better = true;
        } else if (f1 == choice.dev_f1 &&
                   tie_key(t - 0.5) < tie_key(choice.threshold - 0.5)) {
            better = true;
        }
        if (better) {
            choice.threshold = t;
            choice.dev_f1 = f1;
            have_best = true;
        }
    }
    return choice;
}

}  // namespace polar
