#include "polar/ensemble.hpp"

#include <algorithm>
#include <fstream>

#include "polar/threshold.hpp"

namespace polar {

std::string to_string(StrategyKind k) {
    switch (k) {
        case StrategyKind::model_a_tuned: return "model_a_tuned";
        case StrategyKind::model_b_tuned: return "model_b_tuned";
        case StrategyKind::average: return "average";
        case StrategyKind::weighted: return "weighted";
    }
    throw ValidationError("invalid strategy kind enum value");
}

StrategyKind strategy_kind_from_string(const std::string& s) {
    if (s == "model_a_tuned") return StrategyKind::model_a_tuned;
    if (s == "model_b_tuned") return StrategyKind::model_b_tuned;
    if (s == "average") return StrategyKind::average;
    if (s == "weighted") return StrategyKind::weighted;
    throw ValidationError("invalid strategy kind: '" + s + "'");
}

namespace {

void check_lengths(std::span<const double> pa, std::span<const double> pb) {
    if (pa.size() != pb.size()) {
        throw ValidationError("ensemble inputs must have equal length (" +
                              std::to_string(pa.size()) + " vs " + std::to_string(pb.size()) +
                              ")");
    }
}

}  // namespace

std::vector<double> combine_average(std::span<const double> pa, std::span<const double> pb) {
    check_lengths(pa, pb);
    std::vector<double> out(pa.size());
    for (size_t i = 0; i < pa.size(); ++i) {
        out[i] = (pa[i] + pb[i]) / 2.0;
    }
    return out;
}

std::vector<double> combine_weighted(std::span<const double> pa, std::span<const double> pb,
                                     double w) {
    check_lengths(pa, pb);
    if (w < 0.0 || w > 1.0) {
        throw ValidationError("ensemble weight must lie in [0,1]");
    }
    std::vector<double> out(pa.size());
    for (size_t i = 0; i < pa.size(); ++i) {
        out[i] = w * pa[i] + (1.0 - w) * pb[i];
    }
    return out;
}

std::vector<double> apply_strategy(const StrategyId& s, std::span<const double> pa,
                                   std::span<const double> pb) {
    switch (s.kind) {
        case StrategyKind::model_a_tuned:
            return std::vector<double>(pa.begin(), pa.end());
        case StrategyKind::model_b_tuned:
            return std::vector<double>(pb.begin(), pb.end());
        case StrategyKind::average:
            return combine_average(pa, pb);
        case StrategyKind::weighted:
            if (!s.weight) {
                throw ValidationError("weighted strategy requires a weight");
            }
            return combine_weighted(pa, pb, *s.weight);
    }
    throw ValidationError("invalid strategy kind enum value");
}

TunedDecision select_strategy(std::span<const int> truth, std::span<const double> pa,
                              std::span<const double> pb, const RunConfig& cfg) {
    check_lengths(pa, pb);
    cfg.validate();
    ThresholdGrid grid{cfg.threshold_grid};

    std::vector<StrategyId> candidates = {
        {StrategyKind::model_a_tuned, std::nullopt},
        {StrategyKind::model_b_tuned, std::nullopt},
        {StrategyKind::average, std::nullopt},
    };
    for (double w : cfg.weight_grid) {
        candidates.push_back({StrategyKind::weighted, w});
    }

    TunedDecision decision;
    bool have_best = false;
    for (const auto& cand : candidates) {
        const auto series = apply_strategy(cand, pa, pb);
        const auto tuned = tune_threshold(truth, series, grid);
        decision.candidate_table.push_back({cand, tuned.threshold, tuned.dev_f1});

        // Enumeration follows kind order, so "first wins" covers the kind
        // tie rule; within weighted candidates resolve |w - 0.5| then
        // smaller w explicitly (the grid need not be sorted).
        bool better = false;
        if (!have_best || tuned.dev_f1 > decision.dev_f1) {
            better = true;
        } else if (tuned.dev_f1 == decision.dev_f1 &&
                   cand.kind == StrategyKind::weighted &&
                   decision.strategy.kind == StrategyKind::weighted) {
            const auto cand_key = tie_key(*cand.weight - 0.5);
            const auto best_key = tie_key(*decision.strategy.weight - 0.5);
            better = cand_key < best_key ||
                     (cand_key == best_key && *cand.weight < *decision.strategy.weight);
        }
        if (better) {
            decision.strategy = cand;
            decision.threshold = tuned.threshold;
            decision.dev_f1 = tuned.dev_f1;
            have_best = true;
        }
    }
    return decision;
}

void write_decisions(const std::vector<TunedDecision>& decisions,
                     const std::filesystem::path& path) {
    std::vector<const TunedDecision*> ordered;
    ordered.reserve(decisions.size());
    for (const auto& d : decisions) {
        if (!d.lang) {
            throw ValidationError("decision without a language cannot be written");
        }
        ordered.push_back(&d);
    }
    std::sort(ordered.begin(), ordered.end(), [](const TunedDecision* a, const TunedDecision* b) {
        return a->lang->str() < b->lang->str();
    });

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open for writing: " + path.string());
    }
    for (const auto* d : ordered) {
        nlohmann::json j{{"lang", d->lang->str()},
                         {"strategy", to_string(d->strategy.kind)},
                         {"threshold", d->threshold},
                         {"dev_f1", d->dev_f1}};
        if (d->strategy.weight) {
            j["weight"] = *d->strategy.weight;
        }
        out << j.dump() << '\n';
    }
}

std::vector<TunedDecision> read_decisions(const std::filesystem::path& path,
                                          const LanguageRegistry& registry) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open for reading: " + path.string());
    }
    std::vector<TunedDecision> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": JSON parse error: " + e.what());
        }
        TunedDecision d;
        d.lang = LanguageCode(j.at("lang").get<std::string>(), registry);
        d.strategy.kind = strategy_kind_from_string(j.at("strategy").get<std::string>());
        if (j.contains("weight")) {
            d.strategy.weight = j.at("weight").get<double>();
        }
        if (d.strategy.kind == StrategyKind::weighted && !d.strategy.weight) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": weighted strategy requires a weight");
        }
        d.threshold = j.at("threshold").get<double>();
        d.dev_f1 = j.contains("dev_f1") ? j.at("dev_f1").get<double>() : 0.0;
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace polar
