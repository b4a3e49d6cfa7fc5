#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polar/config.hpp"
#include "polar/types.hpp"

namespace polar {

/// Candidate order doubles as the tie order: prefer the simpler system.
enum class StrategyKind { model_a_tuned, model_b_tuned, average, weighted };

std::string to_string(StrategyKind k);
StrategyKind strategy_kind_from_string(const std::string& s);

struct StrategyId {
    StrategyKind kind = StrategyKind::model_a_tuned;
    std::optional<double> weight;  // present iff kind == weighted

    friend bool operator==(const StrategyId&, const StrategyId&) = default;
};

struct CandidateResult {
    StrategyId strategy;
    double threshold = 0.5;
    double dev_f1 = 0.0;
};

/// The per-language winner plus the full candidate table it was picked from.
struct TunedDecision {
    std::optional<LanguageCode> lang;
    StrategyId strategy;
    double threshold = 0.5;
    double dev_f1 = 0.0;
    std::vector<CandidateResult> candidate_table;
};

std::vector<double> combine_average(std::span<const double> pa, std::span<const double> pb);
std::vector<double> combine_weighted(std::span<const double> pa, std::span<const double> pb,
                                     double w);

/// Builds the combined probability series for one strategy.
std::vector<double> apply_strategy(const StrategyId& s, std::span<const double> pa,
                                   std::span<const double> pb);

/// Tunes {model_a, model_b, average} + one weighted candidate per grid
/// weight, each over the full threshold grid, and returns the argmax.
/// Ties: strategy kind order, then smaller |w - 0.5|, then smaller w,
/// then the threshold tie rule.
TunedDecision select_strategy(std::span<const int> truth, std::span<const double> pa,
                              std::span<const double> pb, const RunConfig& cfg);

/// Decision file: one JSON object per language
///   {"lang", "strategy", "weight"?, "threshold", "dev_f1"}
/// sorted by language. Decisions must carry a language to be written.
void write_decisions(const std::vector<TunedDecision>& decisions,
                     const std::filesystem::path& path);
std::vector<TunedDecision> read_decisions(
    const std::filesystem::path& path,
    const LanguageRegistry& registry = LanguageRegistry::default_registry());

}  // namespace polar
