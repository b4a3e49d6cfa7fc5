#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "polar/types.hpp"

namespace polar {

struct LengthBounds {
    int min_chars = 10;
    int max_chars = 2000;
    int min_tokens = 3;
    int max_tokens = 300;
};

struct StrategyMix {
    double direct = 0.50;
    double paraphrase = 0.30;
    double contrastive = 0.20;
};

struct EndpointConfig {
    std::string chat_base_url;       // OpenAI-compatible /chat/completions host
    std::string chat_model;          // model tag sent in request bodies
    std::string translate_base_url;  // /translate host
    std::string embed_base_url;      // /embed host (http embedding mode)
    int max_retries = 3;
    double backoff_base_s = 1.0;
    double backoff_factor = 2.0;
    double timeout_s = 30.0;
};

/// One configuration object drives every subcommand; all randomness flows
/// from `seed`. Loaded from a JSON file, flags override fields, secrets
/// come from the environment only.
struct RunConfig {
    uint64_t seed = 42;
    std::vector<double> threshold_grid;          // default 0.30..0.70 step 0.05
    std::vector<double> weight_grid = {0.3, 0.4, 0.6, 0.7};
    double dedup_threshold = 0.90;
    double roundtrip_threshold = 0.70;
    StrategyMix strategy_mix;
    double synth_ratio = 0.30;
    LengthBounds length_bounds;
    std::vector<std::string> leakage_patterns;   // default set, see default_leakage_patterns()
    int concurrency_limit = 4;
    EndpointConfig endpoints;
    std::vector<std::string> languages;          // registry override; empty = default 22

    RunConfig();

    const LanguageRegistry& registry() const;

    /// Throws ConfigError on out-of-range grids or a strategy mix that does
    /// not sum to 1 within 1e-9.
    void validate() const;

    static RunConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    static RunConfig load(const std::filesystem::path& path);

private:
    mutable std::shared_ptr<LanguageRegistry> registry_;
};

std::vector<double> default_threshold_grid();
std::vector<std::string> default_leakage_patterns();

}  // namespace polar
