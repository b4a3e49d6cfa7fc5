#include "polar/types.hpp"

#include <algorithm>
#include <cctype>

namespace polar {

namespace {

bool is_blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

LanguageRegistry::LanguageRegistry(std::vector<std::string> codes) : codes_(std::move(codes)) {
    if (codes_.empty()) {
        throw ConfigError("language registry must not be empty");
    }
    for (const auto& c : codes_) {
        if (c.size() != 3 ||
            !std::all_of(c.begin(), c.end(), [](unsigned char ch) { return std::islower(ch); })) {
            throw ConfigError("invalid language code in registry: '" + c + "'");
        }
    }
    std::sort(codes_.begin(), codes_.end());
    codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
}

const LanguageRegistry& LanguageRegistry::default_registry() {
    static const LanguageRegistry registry({
        "amh", "arb", "ben", "deu", "eng", "fas", "hau", "hin", "ita", "khm", "mya",
        "nep", "ori", "pan", "pol", "rus", "spa", "swa", "tel", "tur", "urd", "zho",
    });
    return registry;
}

bool LanguageRegistry::contains(const std::string& code) const {
    return std::binary_search(codes_.begin(), codes_.end(), code);
}

LanguageCode::LanguageCode(std::string code, const LanguageRegistry& registry)
    : code_(std::move(code)) {
    if (code_.size() != 3 || !std::all_of(code_.begin(), code_.end(), [](unsigned char c) {
            return std::islower(c) && std::isalpha(c);
        })) {
        throw ValidationError("language code must be 3 lowercase ASCII letters: '" + code_ + "'");
    }
    if (!registry.contains(code_)) {
        throw ValidationError("unknown language code: '" + code_ + "'");
    }
}

std::string to_string(Source s) {
    return s == Source::real ? "real" : "synthetic";
}

Source source_from_string(const std::string& s) {
    if (s == "real") return Source::real;
    if (s == "synthetic") return Source::synthetic;
    throw ValidationError("invalid source: '" + s + "'");
}

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::direct: return "direct";
        case Strategy::paraphrase: return "paraphrase";
        case Strategy::contrastive: return "contrastive";
        case Strategy::backtranslation: return "backtranslation";
        case Strategy::crosslingual: return "crosslingual";
    }
    throw ValidationError("invalid strategy enum value");
}

Strategy strategy_from_string(const std::string& s) {
    if (s == "direct") return Strategy::direct;
    if (s == "paraphrase") return Strategy::paraphrase;
    if (s == "contrastive") return Strategy::contrastive;
    if (s == "backtranslation") return Strategy::backtranslation;
    if (s == "crosslingual") return Strategy::crosslingual;
    throw ValidationError("invalid strategy: '" + s + "'");
}

void validate_sample(const Sample& s) {
    if (s.label != 0 && s.label != 1) {
        throw ValidationError("sample '" + s.id + "': label must be 0 or 1");
    }
    if (is_blank(s.text)) {
        throw ValidationError("sample '" + s.id + "': text is empty after trimming");
    }
    if (s.source == Source::synthetic && !s.strategy.has_value()) {
        throw ValidationError("sample '" + s.id + "': synthetic samples require a strategy");
    }
    if (s.source == Source::real && s.strategy.has_value()) {
        throw ValidationError("sample '" + s.id + "': real samples must not carry a strategy");
    }
}

Dataset Dataset::from_samples(std::vector<Sample> samples) {
    Dataset d;
    if (!samples.empty()) {
        d.lang = samples.front().lang;
        for (const auto& s : samples) {
            if (s.lang != *d.lang) {
                throw ValidationError("dataset mixes languages: '" + d.lang->str() + "' and '" +
                                      s.lang.str() + "'");
            }
        }
    }
    d.samples = std::move(samples);
    return d;
}

}  // namespace polar
