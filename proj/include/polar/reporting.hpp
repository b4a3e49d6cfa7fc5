#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polar/ensemble.hpp"

namespace polar {

/// Per-language F1 values for one submission or run.
struct ResultTable {
    std::string name;
    std::map<std::string, double> rows;  // lang -> F1, key-sorted
    double mean = 0.0;

    nlohmann::json to_json() const;
    static ResultTable from_json(const nlohmann::json& j);
    static ResultTable load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;
};

/// Validates rows (non-empty, values in [0,1]) and fills the mean.
ResultTable aggregate(const std::string& name, const std::map<std::string, double>& rows);

struct DeltaTable {
    std::map<std::string, double> deltas;  // b - a
    double mean_delta = 0.0;
    int improved = 0;   // delta > 0, plus zero deltas published with a '+' sign
    int regressed = 0;  // delta < 0, plus zero deltas published with a '-' sign
    int unchanged = 0;  // remaining exact zeros
};

/// Published tables print signed zero deltas (+0.0% vs -0.0%) that encode
/// sub-rounding direction; zero_signs carries those signs (+1/-1) so
/// exact-zero rows classify the way the source table counted them.
DeltaTable delta_table(const ResultTable& a, const ResultTable& b,
                       const std::map<std::string, int>& zero_signs = {});

struct CombineResult {
    ResultTable best;
    std::map<std::string, std::string> provenance;  // lang -> winning table name
};

/// Per-language maximum across tables; ties go to the earliest table.
CombineResult combine_best(const std::vector<ResultTable>& tables);

struct StrategyHistogram {
    std::map<std::string, int> by_kind;  // strategy kind name -> count
    int ensemble_total = 0;              // average + weighted
    int total = 0;
};

StrategyHistogram strategy_histogram(const std::vector<TunedDecision>& decisions);

struct LeaderboardRow {
    std::string lang;
    int rank = 0;
    double ours = 0.0;
    double best = 0.0;
    double delta = 0.0;  // ours - best
};

struct LeaderboardReport {
    std::vector<LeaderboardRow> rows;  // lang ascending
    int first_place = 0;
    int top3 = 0;
    int top10 = 0;
    double ours_mean = 0.0;
    std::optional<double> mean_delta;  // ours_mean - overall best mean, when known
};

/// `best` holds the per-language winning scores; overall_best_mean is the
/// top-ranked team's published average (the per-language bests average to
/// something else, since they come from many teams).
LeaderboardReport leaderboard_compare(const ResultTable& ours, const ResultTable& best,
                                      const std::map<std::string, int>& ranks,
                                      std::optional<double> overall_best_mean = std::nullopt);

enum class RenderFormat { csv, markdown };

/// Deterministic rendering: languages ascending, Mean last, F1 at three
/// decimals, deltas as signed percents with one decimal.
std::string render(const ResultTable& table, RenderFormat format);
std::string render_delta(const ResultTable& a, const ResultTable& b, const DeltaTable& d,
                         RenderFormat format);
std::string render_leaderboard(const LeaderboardReport& report, RenderFormat format);
std::string render_histogram(const StrategyHistogram& h, RenderFormat format);

std::string format_f1(double v);         // "0.811"
std::string format_delta_pct(double d);  // "+8.7%"

/// Shipped transcription of the published per-language results
/// (submission scores, winning strategy, threshold, printed delta signs).
struct ResultsFixture {
    ResultTable sub1;
    ResultTable sub4;
    std::map<std::string, int> delta_signs;        // sign of the printed delta column
    std::vector<TunedDecision> decisions;          // strategy + threshold columns
};

ResultsFixture load_results_fixture(const std::filesystem::path& path);

/// Shipped transcription of the official per-language leaderboard.
struct LeaderboardFixture {
    ResultTable ours;
    ResultTable best;
    std::map<std::string, int> ranks;
    double overall_best_mean = 0.0;   // published average of the top team
    double published_avg_delta = 0.0;
};

LeaderboardFixture load_leaderboard_fixture(const std::filesystem::path& path);

}  // namespace polar
