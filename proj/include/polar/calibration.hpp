#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "polar/types.hpp"

namespace polar {

enum class CalibrationVerdict { under_confident, calibrated, over_confident };

std::string to_string(CalibrationVerdict v);

struct ReliabilityBin {
    long count = 0;
    double mean_prob = 0.0;
    std::optional<double> positive_rate;  // filled only when truth supplied
};

/// Why threshold tuning helps: mean predicted probability far from 0.5
/// signals a model whose default cutoff is misplaced.
struct CalibrationReport {
    std::optional<LanguageCode> lang;
    double mean_prob = 0.0;
    CalibrationVerdict verdict = CalibrationVerdict::calibrated;
    std::array<ReliabilityBin, 10> bins;  // [0,0.1), ..., [0.9,1.0]
    std::optional<double> ece;            // bin-weighted |mean_prob - positive_rate|
};

/// Verdict cut points: under-confident below 0.35, over-confident above
/// 0.65. Probability 1.0 lands in the top bin (right-closed).
CalibrationReport calibration_report(std::span<const double> probs,
                                     std::span<const int> truth = {});

nlohmann::json calibration_to_json(const CalibrationReport& r);

}  // namespace polar
