#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace polar {

/// Error categories map 1:1 to CLI exit codes:
/// config/usage = 1, data validation = 2, external service = 3.
enum class ErrorKind { config = 1, validation = 2, service = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error(ErrorKind::config, m) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error(ErrorKind::validation, m) {}
};

struct ServiceError : Error {
    explicit ServiceError(const std::string& m) : Error(ErrorKind::service, m) {}
};

/// The set of language codes a run accepts. Ships with the 22 task codes
/// as default; any registry may be substituted for other datasets.
class LanguageRegistry {
public:
    explicit LanguageRegistry(std::vector<std::string> codes);

    static const LanguageRegistry& default_registry();

    bool contains(const std::string& code) const;
    const std::vector<std::string>& codes() const { return codes_; }

private:
    std::vector<std::string> codes_;
};

/// 3-letter lowercase language tag validated against a registry.
class LanguageCode {
public:
    LanguageCode(std::string code,
                 const LanguageRegistry& registry = LanguageRegistry::default_registry());

    const std::string& str() const { return code_; }

    friend bool operator==(const LanguageCode&, const LanguageCode&) = default;
    friend auto operator<=>(const LanguageCode& a, const LanguageCode& b) {
        return a.code_ <=> b.code_;
    }

private:
    std::string code_;
};

enum class Source { real, synthetic };

enum class Strategy { direct, paraphrase, contrastive, backtranslation, crosslingual };

std::string to_string(Source s);
std::string to_string(Strategy s);
Source source_from_string(const std::string& s);
Strategy strategy_from_string(const std::string& s);

/// One text instance. `extra` holds unknown JSON fields so they survive a
/// read/write round trip.
struct Sample {
    std::string id;
    LanguageCode lang;
    std::string text;
    int label = 0;
    Source source = Source::real;
    std::optional<Strategy> strategy;
    std::optional<std::string> topic;
    std::optional<std::string> parent_id;
    nlohmann::json extra = nlohmann::json::object();

    friend bool operator==(const Sample&, const Sample&) = default;
};

/// Throws ValidationError if the sample breaks a core invariant:
/// label outside {0,1}, empty text after trimming, or a strategy/source
/// combination that is not allowed (strategy present iff synthetic).
void validate_sample(const Sample& s);

/// Ordered samples sharing one language. `lang` is empty only for an
/// empty dataset (the line format carries no header to recover it from).
struct Dataset {
    std::optional<LanguageCode> lang;
    std::vector<Sample> samples;

    static Dataset from_samples(std::vector<Sample> samples);

    size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct PredictionRecord {
    std::string id;
    double prob = 0.0;  // probability of class 1

    friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

/// Per-model, per-language probability series aligned to sample ids.
struct PredictionSet {
    LanguageCode lang;
    std::string model;
    std::vector<PredictionRecord> records;

    friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

}  // namespace polar
