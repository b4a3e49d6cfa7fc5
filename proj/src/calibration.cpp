#include "polar/calibration.hpp"

#include <algorithm>
#include <cmath>

namespace polar {

std::string to_string(CalibrationVerdict v) {
    switch (v) {
        case CalibrationVerdict::under_confident: return "under_confident";
        case CalibrationVerdict::calibrated: return "calibrated";
        case CalibrationVerdict::over_confident: return "over_confident";
    }
    throw ValidationError("invalid verdict enum value");
}

CalibrationReport calibration_report(std::span<const double> probs, std::span<const int> truth) {
    if (probs.empty()) {
        throw ValidationError("calibration_report: empty input");
    }
    const bool with_truth = !truth.empty();
    if (with_truth && truth.size() != probs.size()) {
        throw ValidationError("calibration_report: truth and probs lengths differ");
    }

    CalibrationReport r;
    std::array<double, 10> prob_sums{};
    std::array<long, 10> pos_counts{};

    double total = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        const double p = probs[i];
        if (p < 0.0 || p > 1.0) {
            throw ValidationError("calibration_report: probabilities must lie in [0,1]");
        }
        total += p;
        // Equal-width bins [0,0.1) ... [0.9,1.0]; 1.0 belongs to the top bin.
        const int bin = std::min(static_cast<int>(p * 10.0), 9);
        r.bins[bin].count += 1;
        prob_sums[bin] += p;
        if (with_truth && truth[i] == 1) {
            pos_counts[bin] += 1;
        }
    }
    r.mean_prob = total / static_cast<double>(probs.size());

    for (int b = 0; b < 10; ++b) {
        if (r.bins[b].count > 0) {
            r.bins[b].mean_prob = prob_sums[b] / static_cast<double>(r.bins[b].count);
            if (with_truth) {
                r.bins[b].positive_rate =
                    static_cast<double>(pos_counts[b]) / static_cast<double>(r.bins[b].count);
            }
        }
    }

    if (r.mean_prob < 0.35) {
        r.verdict = CalibrationVerdict::under_confident;
    } else if (r.mean_prob > 0.65) {
        r.verdict = CalibrationVerdict::over_confident;
    } else {
        r.verdict = CalibrationVerdict::calibrated;
    }

    if (with_truth) {
        double ece = 0.0;
        for (int b = 0; b < 10; ++b) {
            if (r.bins[b].count > 0) {
                const double weight =
                    static_cast<double>(r.bins[b].count) / static_cast<double>(probs.size());
                ece += weight * std::abs(r.bins[b].mean_prob - *r.bins[b].positive_rate);
            }
        }
        r.ece = ece;
    }
    return r;
}

nlohmann::json calibration_to_json(const CalibrationReport& r) {
    nlohmann::json bins = nlohmann::json::array();
    for (int b = 0; b < 10; ++b) {
        nlohmann::json bin{{"lo", b / 10.0},
                           {"hi", (b + 1) / 10.0},
                           {"count", r.bins[b].count},
                           {"mean_prob", r.bins[b].mean_prob}};
        if (r.bins[b].positive_rate) {
            bin["positive_rate"] = *r.bins[b].positive_rate;
        }
        bins.push_back(std::move(bin));
    }
    nlohmann::json j{{"mean_prob", r.mean_prob},
                     {"verdict", to_string(r.verdict)},
                     {"reliability_bins", std::move(bins)}};
    if (r.lang) {
        j["lang"] = r.lang->str();
    }
    if (r.ece) {
        j["ece"] = *r.ece;
    }
    return j;
}

}  // namespace polar
