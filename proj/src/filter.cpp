#include "polar/filter.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>
#include <unordered_map>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace polar {

namespace {

bool is_space_cp(UChar32 c) {
    return u_isUWhiteSpace(c) != 0;
}

// Strip Cc/Cf controls (format chars like zero-width joiners included);
// tab/newline count as whitespace instead so they collapse, not vanish.
bool is_stripped_control(UChar32 c) {
    if (is_space_cp(c)) return false;
    const auto type = u_charType(c);
    return type == U_CONTROL_CHAR || type == U_FORMAT_CHAR;
}

}  // namespace

std::string normalize_text(const std::string& text) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
        throw ServiceError("ICU NFC normalizer unavailable");
    }
    icu::UnicodeString input = icu::UnicodeString::fromUTF8(text);
    icu::UnicodeString composed = nfc->normalize(input, status);
    if (U_FAILURE(status)) {
        throw ValidationError("unicode normalization failed");
    }

    icu::UnicodeString cleaned;
    bool pending_space = false;
    for (int32_t i = 0; i < composed.length();) {
        const UChar32 c = composed.char32At(i);
        i += U16_LENGTH(c);
        if (is_stripped_control(c)) continue;
        if (is_space_cp(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space && cleaned.length() > 0) {
            cleaned.append(static_cast<UChar32>(' '));
        }
        pending_space = false;
        cleaned.append(c);
    }

    std::string out;
    cleaned.toUTF8String(out);
    return out;
}

size_t count_codepoints(const std::string& text) {
    size_t n = 0;
    for (unsigned char c : text) {
        if ((c & 0xc0) != 0x80) ++n;  // count non-continuation bytes
    }
    return n;
}

size_t count_tokens(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    size_t n = 0;
    while (in >> tok) ++n;
    return n;
}

FilterStep clean_and_length(const Dataset& d, const LengthBounds& bounds) {
    FilterStep step;
    step.kept.lang = d.lang;
    for (const auto& s : d.samples) {
        Sample cleaned = s;
        cleaned.text = normalize_text(s.text);
        if (cleaned.text.empty()) {
            step.drops.push_back({s.id, "clean_length", "empty_after_clean"});
            continue;
        }
        const size_t chars = count_codepoints(cleaned.text);
        const size_t tokens = count_tokens(cleaned.text);
        if (chars < static_cast<size_t>(bounds.min_chars)) {
            step.drops.push_back({s.id, "clean_length", "too_short"});
        } else if (chars > static_cast<size_t>(bounds.max_chars)) {
            step.drops.push_back({s.id, "clean_length", "too_long"});
        } else if (tokens < static_cast<size_t>(bounds.min_tokens)) {
            step.drops.push_back({s.id, "clean_length", "too_few_tokens"});
        } else if (tokens > static_cast<size_t>(bounds.max_tokens)) {
            step.drops.push_back({s.id, "clean_length", "too_many_tokens"});
        } else {
            step.kept.samples.push_back(std::move(cleaned));
        }
    }
    return step;
}

FilterStep leakage_filter(const Dataset& d, const std::vector<std::string>& patterns) {
    std::vector<std::regex> compiled;
    compiled.reserve(patterns.size());
    for (const auto& p : patterns) {
        try {
            compiled.emplace_back(p, std::regex::icase);
        } catch (const std::regex_error& e) {
            throw ConfigError("invalid leakage pattern '" + p + "': " + e.what());
        }
    }

    FilterStep step;
    step.kept.lang = d.lang;
    for (const auto& s : d.samples) {
        std::string matched;
        for (size_t i = 0; i < compiled.size(); ++i) {
            if (std::regex_search(s.text, compiled[i])) {
                matched = patterns[i];
                break;
            }
        }
        if (!matched.empty()) {
            step.drops.push_back({s.id, "leakage", "pattern:" + matched});
        } else {
            step.kept.samples.push_back(s);
        }
    }
    return step;
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw ValidationError("cosine: dimension mismatch (" + std::to_string(u.size()) +
                              " vs " + std::to_string(v.size()) + ")");
    }
    double dot = 0.0, uu = 0.0, vv = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        uu += u[i] * u[i];
        vv += v[i] * v[i];
    }
    if (uu == 0.0 || vv == 0.0) {
        throw ValidationError("cosine: zero vector");
    }
    return dot / (std::sqrt(uu) * std::sqrt(vv));
}

FilterStep dedup(const Dataset& synthetic, const Dataset& reference, EmbeddingProvider& provider,
                 double threshold) {
    if (synthetic.empty()) {
        FilterStep empty;
        empty.kept.lang = synthetic.lang;
        return empty;
    }
    std::vector<std::string> texts;
    texts.reserve(synthetic.size() + reference.size());
    for (const auto& s : synthetic.samples) texts.push_back(s.text);
    for (const auto& s : reference.samples) texts.push_back(s.text);
    const auto vectors = texts.empty() ? std::vector<std::vector<double>>{}
                                       : provider.embed(texts);
    const size_t n_syn = synthetic.size();

    FilterStep step;
    step.kept.lang = synthetic.lang;
    std::vector<size_t> kept_indices;
    for (size_t i = 0; i < n_syn; ++i) {
        const auto& vi = vectors[i];
        std::string dropped_reason;

        // Pass A: against every reference sample.
        for (size_t r = 0; r < reference.size(); ++r) {
            if (cosine(vi, vectors[n_syn + r]) >= threshold) {
                dropped_reason = "dup_of_real:" + reference.samples[r].id;
                break;
            }
        }
        // Pass B: greedy keep-first against earlier kept synthetic samples.
        if (dropped_reason.empty()) {
            for (size_t k : kept_indices) {
                if (cosine(vi, vectors[k]) >= threshold) {
                    dropped_reason = "dup_of_synth:" + synthetic.samples[k].id;
                    break;
                }
            }
        }

        if (dropped_reason.empty()) {
            kept_indices.push_back(i);
            step.kept.samples.push_back(synthetic.samples[i]);
        } else {
            step.drops.push_back({synthetic.samples[i].id, "dedup", dropped_reason});
        }
    }
    return step;
}

ParaphraseCheck paraphrase_distinctness(const Sample& child, const Sample& parent,
                                        EmbeddingProvider& provider) {
    if (!child.parent_id || *child.parent_id != parent.id) {
        throw ValidationError("paraphrase_distinctness: '" + child.id +
                              "' does not reference parent '" + parent.id + "'");
    }
    const auto vecs = provider.embed({child.text, parent.text});
    const double sim = cosine(vecs[0], vecs[1]);
    if (sim >= 0.90) return ParaphraseCheck::too_similar;
    if (sim < 0.60) return ParaphraseCheck::drifted;
    return ParaphraseCheck::keep;
}

bool roundtrip_consistent(const std::string& original_text, const std::string& roundtrip_text,
                          EmbeddingProvider& provider, double threshold) {
    const auto vecs = provider.embed({original_text, roundtrip_text});
    return cosine(vecs[0], vecs[1]) >= threshold;
}

nlohmann::json FilterReport::to_json() const {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : stage_counts) {
        stages.push_back({{"stage", s.stage},
                          {"input_n", s.input_n},
                          {"kept_n", s.kept_n},
                          {"dropped_n", s.dropped_n}});
    }
    nlohmann::json drops = nlohmann::json::array();
    for (const auto& d : drop_log) {
        drops.push_back({{"id", d.id}, {"stage", d.stage}, {"reason", d.reason}});
    }
    return nlohmann::json{{"stage_counts", std::move(stages)}, {"drop_log", std::move(drops)}};
}

PipelineResult run_pipeline(const Dataset& synthetic, const Dataset& reference,
                            const RunConfig& cfg, EmbeddingProvider& provider) {
    PipelineResult result;
    auto record_stage = [&result](const std::string& name, long input_n, const FilterStep& step) {
        result.report.stage_counts.push_back(
            {name, input_n, static_cast<long>(step.kept.size()),
             static_cast<long>(step.drops.size())});
        for (const auto& d : step.drops) {
            result.report.drop_log.push_back(d);
        }
    };

    std::unordered_map<std::string, const Sample*> reference_by_id;
    for (const auto& s : reference.samples) {
        reference_by_id.emplace(s.id, &s);
    }

    // Stage 1: cleaning and length bounds.
    auto stage1 = clean_and_length(synthetic, cfg.length_bounds);
    record_stage("clean_length", static_cast<long>(synthetic.size()), stage1);

    // Stage 2: label leakage patterns.
    auto stage2 = leakage_filter(stage1.kept, cfg.leakage_patterns);
    record_stage("leakage", static_cast<long>(stage1.kept.size()), stage2);

    // Stage 3: paraphrase distinctness against the parent, then embedding
    // dedup (reference pass, then greedy intra-synthetic pass).
    FilterStep stage3;
    stage3.kept.lang = stage2.kept.lang;
    {
        Dataset pre;
        pre.lang = stage2.kept.lang;
        for (const auto& s : stage2.kept.samples) {
            if (s.strategy == Strategy::paraphrase && s.parent_id) {
                auto it = reference_by_id.find(*s.parent_id);
                if (it == reference_by_id.end()) {
                    stage3.drops.push_back({s.id, "dedup", "missing_parent"});
                    continue;
                }
                const auto check = paraphrase_distinctness(s, *it->second, provider);
                if (check == ParaphraseCheck::too_similar) {
                    stage3.drops.push_back({s.id, "dedup", "too_similar"});
                    continue;
                }
                if (check == ParaphraseCheck::drifted) {
                    stage3.drops.push_back({s.id, "dedup", "drifted"});
                    continue;
                }
            }
            pre.samples.push_back(s);
        }
        auto deduped = dedup(pre, reference, provider, cfg.dedup_threshold);
        stage3.kept = std::move(deduped.kept);
        for (auto& d : deduped.drops) {
            stage3.drops.push_back(std::move(d));
        }
    }
    record_stage("dedup", static_cast<long>(stage2.kept.size()), stage3);

    // Stage 4: round-trip consistency, only for backtranslated samples.
    FilterStep stage4;
    stage4.kept.lang = stage3.kept.lang;
    for (const auto& s : stage3.kept.samples) {
        if (s.strategy == Strategy::backtranslation) {
            if (!s.parent_id) {
                stage4.drops.push_back({s.id, "roundtrip", "missing_parent"});
                continue;
            }
            auto it = reference_by_id.find(*s.parent_id);
            if (it == reference_by_id.end()) {
                stage4.drops.push_back({s.id, "roundtrip", "missing_parent"});
                continue;
            }
            if (!roundtrip_consistent(it->second->text, s.text, provider,
                                      cfg.roundtrip_threshold)) {
                stage4.drops.push_back({s.id, "roundtrip", "inconsistent"});
                continue;
            }
        }
        stage4.kept.samples.push_back(s);
    }
    record_stage("roundtrip", static_cast<long>(stage3.kept.size()), stage4);

    result.kept = std::move(stage4.kept);
    return result;
}

}  // namespace polar
