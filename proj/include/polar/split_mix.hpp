#pragma once

#include <cstdint>

#include <json.hpp>

#include "polar/types.hpp"

namespace polar {

struct SplitResult {
    Dataset train;
    Dataset validation;  // real samples only, by construction
    uint64_t seed = 0;
    double ratio = 0.8;
};

/// Per-label 80/20 split (ratio configurable). Ids are sorted
/// lexicographically per class, shuffled with the (seed, lang, label)
/// stream, and the global train size floor(ratio*n) is hit by handing
/// leftover slots to classes in descending fractional-part order (ties by
/// label ascending). Outputs keep the input dataset order.
/// Throws ValidationError if synthetic samples are present, ConfigError
/// for ratio outside (0,1).
SplitResult stratified_split(const Dataset& d, double ratio, uint64_t seed);

struct MixPlan {
    double synth_ratio = 0.0;
    long n_real = 0;
    long n_synth_target = 0;  // round(r * n_real / (1 - r))
    long n_synth_used = 0;    // min(target, pool size)
    bool capped = false;      // pool smaller than target

    nlohmann::json to_json() const;
};

struct MixResult {
    Dataset mixed;  // real block (input order) then synthetic block (id order)
    MixPlan plan;
};

/// Draws the synthetic additions without replacement from the id-sorted
/// pool using the (seed, lang, "mix") stream. r is the synthetic fraction
/// of the final training set.
MixResult mix_synthetic(const Dataset& train, const Dataset& pool, double r, uint64_t seed);

}  // namespace polar
