#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "polar/types.hpp"

namespace polar {

/// Line-delimited JSON, one sample per line:
///   {"id", "lang", "label", "text", "source", "strategy"?, "topic"?, "parent_id"?}
/// Unknown fields are kept in Sample::extra and written back on save.
/// Throws ValidationError with the offending line number on malformed
/// input, duplicate ids, or unknown language codes.
Dataset read_dataset(const std::filesystem::path& path,
                     const LanguageRegistry& registry = LanguageRegistry::default_registry());

void write_dataset(const Dataset& d, const std::filesystem::path& path);

/// Prediction files carry a header line {"lang", "model"} followed by
/// one {"id", "prob"} line per sample.
PredictionSet read_predictions(const std::filesystem::path& path,
                               const LanguageRegistry& registry = LanguageRegistry::default_registry());

void write_predictions(const PredictionSet& p, const std::filesystem::path& path);

struct AlignedPairs {
    std::vector<int> labels;                // dataset order
    std::vector<double> probs;              // same order
    std::vector<std::string> orphan_ids;    // predictions with no dataset row
};

/// Joins predictions onto the dataset by id, preserving dataset order.
/// Every dataset id must have a prediction (ValidationError listing the
/// absent ids otherwise); extra predictions are reported as orphans,
/// not errors.
AlignedPairs align(const Dataset& d, const PredictionSet& p);

nlohmann::json sample_to_json(const Sample& s);
Sample sample_from_json(const nlohmann::json& j, const LanguageRegistry& registry);

}  // namespace polar
