#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "polar/config.hpp"
#include "polar/embedding.hpp"
#include "polar/types.hpp"

namespace polar {

struct DropRecord {
    std::string id;
    std::string stage;
    std::string reason;
};

struct StageCount {
    std::string stage;
    long input_n = 0;
    long kept_n = 0;
    long dropped_n = 0;
};

struct FilterReport {
    std::vector<StageCount> stage_counts;  // pipeline order
    std::vector<DropRecord> drop_log;

    nlohmann::json to_json() const;
};

struct FilterStep {
    Dataset kept;
    std::vector<DropRecord> drops;
};

/// NFC normalization, control characters stripped, whitespace runs
/// collapsed to single spaces, ends trimmed.
std::string normalize_text(const std::string& text);

/// Unicode code points in the string (UTF-8 input).
size_t count_codepoints(const std::string& text);

/// Whitespace-separated token count after normalization.
size_t count_tokens(const std::string& text);

/// Stage 1: normalize every text, then drop by character and token
/// bounds. Reasons: "too_short", "too_long", "too_few_tokens",
/// "too_many_tokens", "empty_after_clean".
FilterStep clean_and_length(const Dataset& d, const LengthBounds& bounds);

/// Stage 2: drop any sample whose text matches a pattern,
/// case-insensitive. The reason names the matched pattern. A supplied
/// list replaces the defaults entirely.
FilterStep leakage_filter(const Dataset& d, const std::vector<std::string>& patterns);

/// Throws ValidationError on dimension mismatch or a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);

/// Stage 3 core: pass A drops synthetic samples at cosine >= threshold to
/// any reference sample ("dup_of_real:<id>"); pass B is a greedy scan in
/// input order dropping near-duplicates of earlier kept samples
/// ("dup_of_synth:<id>"). Exact O(n^2).
FilterStep dedup(const Dataset& synthetic, const Dataset& reference,
                 EmbeddingProvider& provider, double threshold = 0.90);

enum class ParaphraseCheck { keep, too_similar, drifted };

/// Paraphrases must stay below 0.90 similarity to their parent and above
/// a 0.60 drift floor (the floor is this artifact's addition, flagged by
/// the "drifted" reason).
ParaphraseCheck paraphrase_distinctness(const Sample& child, const Sample& parent,
                                        EmbeddingProvider& provider);

/// Stage 4: backtranslated text must keep cosine >= threshold to its
/// original.
bool roundtrip_consistent(const std::string& original_text, const std::string& roundtrip_text,
                          EmbeddingProvider& provider, double threshold = 0.70);

struct PipelineResult {
    Dataset kept;
    FilterReport report;
};

/// Stages in order: clean_length -> leakage -> dedup (paraphrase
/// distinctness first, then pass A, then pass B) -> roundtrip (only for
/// backtranslated samples). Parents are resolved from `reference` by id;
/// a sample whose required parent is missing is dropped
/// ("missing_parent") rather than waved through unchecked.
PipelineResult run_pipeline(const Dataset& synthetic, const Dataset& reference,
                            const RunConfig& cfg, EmbeddingProvider& provider);

}  // namespace polar
