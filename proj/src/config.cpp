#include "polar/config.hpp"

#include <cmath>
#include <fstream>

namespace polar {

std::vector<double> default_threshold_grid() {
    std::vector<double> grid;
    for (int i = 30; i <= 70; i += 5) {
        grid.push_back(i / 100.0);
    }
    return grid;
}

std::vector<std::string> default_leakage_patterns() {
    return {
        "POLARIZED:", "NON_POLARIZED:", "NON-POLARIZED:",  // generation markers
        "polarized",  "non-polarized",  "label:",          // label words
        "as an AI",   "I cannot",                          // assistant meta-phrases
    };
}

RunConfig::RunConfig()
    : threshold_grid(default_threshold_grid()),
      leakage_patterns(default_leakage_patterns()) {}

const LanguageRegistry& RunConfig::registry() const {
    if (languages.empty()) {
        return LanguageRegistry::default_registry();
    }
    if (!registry_) {
        registry_ = std::make_shared<LanguageRegistry>(languages);
    }
    return *registry_;
}

void RunConfig::validate() const {
    auto check_grid = [](const std::vector<double>& g, const std::string& name) {
        if (g.empty()) {
            throw ConfigError(name + " must not be empty");
        }
        for (double v : g) {
            if (v < 0.0 || v > 1.0) {
                throw ConfigError(name + " values must lie in [0,1]");
            }
        }
    };
    check_grid(threshold_grid, "threshold_grid");
    check_grid(weight_grid, "weight_grid");
    for (size_t i = 1; i < threshold_grid.size(); ++i) {
        if (threshold_grid[i] <= threshold_grid[i - 1]) {
            throw ConfigError("threshold_grid must be strictly ascending");
        }
    }
    const double mix_sum = strategy_mix.direct + strategy_mix.paraphrase + strategy_mix.contrastive;
    if (std::abs(mix_sum - 1.0) > 1e-9) {
        throw ConfigError("strategy_mix must sum to 1");
    }
    if (strategy_mix.direct < 0 || strategy_mix.paraphrase < 0 || strategy_mix.contrastive < 0) {
        throw ConfigError("strategy_mix fractions must be non-negative");
    }
    if (dedup_threshold < 0.0 || dedup_threshold > 1.0 || roundtrip_threshold < 0.0 ||
        roundtrip_threshold > 1.0) {
        throw ConfigError("similarity thresholds must lie in [0,1]");
    }
    if (synth_ratio < 0.0 || synth_ratio >= 1.0) {
        throw ConfigError("synth_ratio must lie in [0,1)");
    }
    if (concurrency_limit < 1) {
        throw ConfigError("concurrency_limit must be at least 1");
    }
    registry();  // force registry construction so bad codes fail here
}

namespace {

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
    if (j.contains(key)) {
        out = j.at(key).get<T>();
    }
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    RunConfig cfg;
    read_if(j, "seed", cfg.seed);
    read_if(j, "threshold_grid", cfg.threshold_grid);
    read_if(j, "weight_grid", cfg.weight_grid);
    read_if(j, "dedup_threshold", cfg.dedup_threshold);
    read_if(j, "roundtrip_threshold", cfg.roundtrip_threshold);
    if (j.contains("strategy_mix")) {
        const auto& m = j.at("strategy_mix");
        read_if(m, "direct", cfg.strategy_mix.direct);
        read_if(m, "paraphrase", cfg.strategy_mix.paraphrase);
        read_if(m, "contrastive", cfg.strategy_mix.contrastive);
    }
    read_if(j, "synth_ratio", cfg.synth_ratio);
    if (j.contains("length_bounds")) {
        const auto& b = j.at("length_bounds");
        read_if(b, "min_chars", cfg.length_bounds.min_chars);
        read_if(b, "max_chars", cfg.length_bounds.max_chars);
        read_if(b, "min_tokens", cfg.length_bounds.min_tokens);
        read_if(b, "max_tokens", cfg.length_bounds.max_tokens);
    }
    read_if(j, "leakage_patterns", cfg.leakage_patterns);
    read_if(j, "concurrency_limit", cfg.concurrency_limit);
    if (j.contains("endpoints")) {
        const auto& e = j.at("endpoints");
        read_if(e, "chat_base_url", cfg.endpoints.chat_base_url);
        read_if(e, "chat_model", cfg.endpoints.chat_model);
        read_if(e, "translate_base_url", cfg.endpoints.translate_base_url);
        read_if(e, "embed_base_url", cfg.endpoints.embed_base_url);
        read_if(e, "max_retries", cfg.endpoints.max_retries);
        read_if(e, "backoff_base_s", cfg.endpoints.backoff_base_s);
        read_if(e, "backoff_factor", cfg.endpoints.backoff_factor);
        read_if(e, "timeout_s", cfg.endpoints.timeout_s);
    }
    read_if(j, "languages", cfg.languages);
    cfg.validate();
    return cfg;
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["threshold_grid"] = threshold_grid;
    j["weight_grid"] = weight_grid;
    j["dedup_threshold"] = dedup_threshold;
    j["roundtrip_threshold"] = roundtrip_threshold;
    j["strategy_mix"] = {{"direct", strategy_mix.direct},
                         {"paraphrase", strategy_mix.paraphrase},
                         {"contrastive", strategy_mix.contrastive}};
    j["synth_ratio"] = synth_ratio;
    j["length_bounds"] = {{"min_chars", length_bounds.min_chars},
                          {"max_chars", length_bounds.max_chars},
                          {"min_tokens", length_bounds.min_tokens},
                          {"max_tokens", length_bounds.max_tokens}};
    j["leakage_patterns"] = leakage_patterns;
    j["concurrency_limit"] = concurrency_limit;
    j["endpoints"] = {{"chat_base_url", endpoints.chat_base_url},
                      {"chat_model", endpoints.chat_model},
                      {"translate_base_url", endpoints.translate_base_url},
                      {"embed_base_url", endpoints.embed_base_url},
                      {"max_retries", endpoints.max_retries},
                      {"backoff_base_s", endpoints.backoff_base_s},
                      {"backoff_factor", endpoints.backoff_factor},
                      {"timeout_s", endpoints.timeout_s}};
    if (!languages.empty()) {
        j["languages"] = languages;
    }
    return j;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

}  // namespace polar
