#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polar/clients.hpp"
#include "polar/config.hpp"
#include "polar/types.hpp"

namespace polar {

/// Topic hints for native generation: five categories of six topics each
/// in the shipped catalog; overrides may use any non-empty shape.
struct TopicCatalog {
    struct Category {
        std::string name;
        std::vector<std::string> topics;
    };
    std::vector<Category> categories;

    static TopicCatalog builtin();
    static TopicCatalog load(const std::filesystem::path& path);

    void validate() const;
    size_t topic_count() const;
};

/// Prompt template plus the request parameters pinned per strategy:
/// direct 0.9/250, paraphrase 0.7/250, contrastive 0.8/500.
struct PromptSpec {
    Strategy strategy = Strategy::direct;
    double temperature = 0.9;
    int max_tokens = 250;
    std::string template_text;  // {language} {topic} {original_text} {target_label}

    /// Substitutes {placeholder} occurrences; unknown placeholders are an error.
    std::string render(const std::map<std::string, std::string>& values) const;

    /// Throws ConfigError if a required placeholder is missing from the
    /// template or temperature is outside (0, 2].
    void validate() const;

    static std::vector<std::string> required_placeholders(Strategy s);
};

struct PromptLibrary {
    PromptSpec direct;
    PromptSpec paraphrase;
    PromptSpec contrastive;

    static PromptLibrary builtin();
    /// Loads direct.txt / paraphrase.txt / contrastive.txt from a directory.
    static PromptLibrary load(const std::filesystem::path& dir);

    const PromptSpec& for_strategy(Strategy s) const;
};

struct MixCounts {
    long direct_n = 0;
    long paraphrase_n = 0;
    long contrastive_n = 0;

    long total() const { return direct_n + paraphrase_n + contrastive_n; }
};

/// Largest-remainder apportionment of total_n by the strategy mix, ties
/// by strategy order direct < paraphrase < contrastive. The contrastive
/// count is rounded down to even (generation emits pairs); an odd
/// remainder moves to direct.
MixCounts allocate_mix(long total_n, const StrategyMix& mix);

enum class DirectLabelAllocation { balanced, counter_imbalance };

struct GenerationBatchPlan {
    LanguageCode lang;
    long total_n = 0;
    MixCounts counts;
    long direct_polarized = 0;
    long direct_non_polarized = 0;
    DirectLabelAllocation label_allocation = DirectLabelAllocation::balanced;
};

/// Balanced mode splits the direct budget 50/50 (odd sample to the
/// polarized side). counter_imbalance flips the real training
/// distribution so the minority class receives the majority share;
/// it requires real_train.
GenerationBatchPlan plan_batch(const LanguageCode& lang, long total_n, const RunConfig& cfg,
                               DirectLabelAllocation alloc = DirectLabelAllocation::balanced,
                               const Dataset* real_train = nullptr);

Sample generate_direct(const LanguageCode& lang, int target_label, const std::string& topic,
                       ChatClient& client, const PromptLibrary& prompts, const RunConfig& cfg,
                       const std::string& id);

Sample generate_paraphrase(const Sample& original, ChatClient& client,
                           const PromptLibrary& prompts, const RunConfig& cfg,
                           const std::string& id);

std::pair<Sample, Sample> generate_contrastive(const LanguageCode& lang, const std::string& topic,
                                               ChatClient& client, const PromptLibrary& prompts,
                                               const RunConfig& cfg,
                                               const std::string& id_polarized,
                                               const std::string& id_non_polarized);

/// Splits a completion in the marker format
///   POLARIZED: <text...>
///   NON_POLARIZED: <text...>
/// Markers match case-insensitively at line starts; "NON-POLARIZED:" is
/// tolerated; multi-line segments are joined with single spaces. The
/// polarized segment must come first. Returns (polarized, non_polarized).
std::pair<std::string, std::string> parse_contrastive(const std::string& completion);

/// Round trip through the pivot chain: lang -> pivots[0] -> ... -> lang.
/// A chain of k pivots issues k+1 translate calls; failures carry the
/// hop index.
std::string backtranslate(const std::string& text, const LanguageCode& lang,
                          const std::vector<std::string>& pivots, TranslationClient& client);

struct BatchResult {
    Dataset samples;     // plan order
    long request_count = 0;
};

struct PlannedRequest {
    Strategy strategy;
    std::string prompt;
    double temperature;
    int max_tokens;
};

/// The exact requests generate_batch would issue, in plan order. Backs
/// the CLI --dry-run and keeps planning independent of transport.
std::vector<PlannedRequest> plan_requests(const GenerationBatchPlan& plan,
                                          const Dataset* real_train,
                                          const TopicCatalog& topics,
                                          const PromptLibrary& prompts, const RunConfig& cfg);

/// Runs the plan against the client with up to cfg.concurrency_limit
/// workers; results are assembled in plan order regardless of completion
/// order, so a deterministic client makes the batch byte-reproducible.
BatchResult generate_batch(const GenerationBatchPlan& plan, const Dataset* real_train,
                           ChatClient& client, const TopicCatalog& topics,
                           const PromptLibrary& prompts, const RunConfig& cfg);

}  // namespace polar
