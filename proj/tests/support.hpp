#pragma once

// Test-side helpers: independent oracles and temp-dir plumbing. The
// oracles deliberately re-derive results through a different route than
// the library (confusion-count F1, flat exhaustive scans) so agreement
// means something.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "polar/config.hpp"
#include "polar/ensemble.hpp"
#include "polar/metrics.hpp"

namespace testsupport {

// F1 per class as 2*TP / (2*TP + FP + FN), macro as the mean over {0,1}.
inline double oracle_macro_f1(std::span<const int> truth, std::span<const int> pred) {
    long counts[2][2] = {};  // [truth][pred]
    for (size_t i = 0; i < truth.size(); ++i) {
        counts[truth[i]][pred[i]] += 1;
    }
    double sum = 0.0;
    for (int cls = 0; cls < 2; ++cls) {
        const long tp = counts[cls][cls];
        const long fp = counts[1 - cls][cls];
        const long fn = counts[cls][1 - cls];
        const long denom = 2 * tp + fp + fn;
        sum += denom > 0 ? 2.0 * static_cast<double>(tp) / static_cast<double>(denom) : 0.0;
    }
    return sum / 2.0;
}

inline long long oracle_tie_key(double x) {
    return std::llround(std::abs(x) * 1e9);
}

struct OracleThreshold {
    double threshold = 0.0;
    double f1 = -1.0;
};

// Exhaustive scan over the grid with the declared tie order.
inline OracleThreshold oracle_tune(std::span<const int> truth, std::span<const double> probs,
                                   const std::vector<double>& grid) {
    OracleThreshold best;
    for (double t : grid) {
        std::vector<int> pred(probs.size());
        for (size_t i = 0; i < probs.size(); ++i) {
            pred[i] = probs[i] >= t ? 1 : 0;
        }
        const double f1 = polar::macro_f1(truth, pred).macro_f1;
        bool better;
        if (f1 != best.f1) {
            better = f1 > best.f1;
        } else {
            const auto kt = oracle_tie_key(t - 0.5);
            const auto kb = oracle_tie_key(best.threshold - 0.5);
            better = kt < kb || (kt == kb && t < best.threshold);
        }
        if (better) {
            best = {t, f1};
        }
    }
    return best;
}

struct OracleSelection {
    polar::StrategyId strategy;
    double threshold = 0.0;
    double f1 = -1.0;
};

// Flat scan over every (strategy, threshold) pair with the full tie order:
// f1, kind, |w-0.5|, w, |t-0.5|, t.
inline OracleSelection oracle_select(std::span<const int> truth, std::span<const double> pa,
                                     std::span<const double> pb, const polar::RunConfig& cfg) {
    std::vector<polar::StrategyId> strategies = {
        {polar::StrategyKind::model_a_tuned, std::nullopt},
        {polar::StrategyKind::model_b_tuned, std::nullopt},
        {polar::StrategyKind::average, std::nullopt},
    };
    for (double w : cfg.weight_grid) {
        strategies.push_back({polar::StrategyKind::weighted, w});
    }

    auto weight_keys = [](const polar::StrategyId& s) {
        return std::pair<long long, double>{
            s.weight ? oracle_tie_key(*s.weight - 0.5) : 0, s.weight.value_or(0.0)};
    };

    OracleSelection best;
    bool have = false;
    for (const auto& strat : strategies) {
        std::vector<double> series(pa.size());
        for (size_t i = 0; i < pa.size(); ++i) {
            switch (strat.kind) {
                case polar::StrategyKind::model_a_tuned: series[i] = pa[i]; break;
                case polar::StrategyKind::model_b_tuned: series[i] = pb[i]; break;
                case polar::StrategyKind::average: series[i] = (pa[i] + pb[i]) / 2.0; break;
                case polar::StrategyKind::weighted:
                    series[i] = *strat.weight * pa[i] + (1.0 - *strat.weight) * pb[i];
                    break;
            }
        }
        for (double t : cfg.threshold_grid) {
            std::vector<int> pred(series.size());
            for (size_t i = 0; i < series.size(); ++i) {
                pred[i] = series[i] >= t ? 1 : 0;
            }
            const double f1 = polar::macro_f1(truth, pred).macro_f1;

            bool better;
            if (!have) {
                better = true;
            } else if (f1 != best.f1) {
                better = f1 > best.f1;
            } else if (strat.kind != best.strategy.kind) {
                better = static_cast<int>(strat.kind) < static_cast<int>(best.strategy.kind);
            } else if (strat.kind == polar::StrategyKind::weighted &&
                       weight_keys(strat) != weight_keys(best.strategy)) {
                better = weight_keys(strat) < weight_keys(best.strategy);
            } else {
                const auto kt = oracle_tie_key(t - 0.5);
                const auto kb = oracle_tie_key(best.threshold - 0.5);
                better = kt < kb || (kt == kb && t < best.threshold);
            }
            if (better) {
                best = {strat, t, f1};
                have = true;
            }
        }
    }
    return best;
}

class TempDir {
public:
    TempDir() {
        const auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 rng(std::random_device{}());
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto candidate = base / ("polar-test-" + std::to_string(rng()));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("cannot create temp dir");
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

}  // namespace testsupport
