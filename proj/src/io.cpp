#include "polar/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace polar {

namespace {

const char* kKnownSampleFields[] = {"id",     "lang",     "label",    "text",
                                    "source", "strategy", "topic",    "parent_id"};

bool is_known_sample_field(const std::string& key) {
    for (const char* f : kKnownSampleFields) {
        if (key == f) return true;
    }
    return false;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open for writing: " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open for reading: " + path.string());
    }
    return in;
}

bool line_is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

[[noreturn]] void line_error(const std::filesystem::path& path, size_t line_no,
                             const std::string& what) {
    throw ValidationError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

Sample sample_from_json(const nlohmann::json& j, const LanguageRegistry& registry) {
    if (!j.is_object()) {
        throw ValidationError("sample line is not a JSON object");
    }
    for (const char* field : {"id", "lang", "label", "text", "source"}) {
        if (!j.contains(field)) {
            throw ValidationError(std::string("sample missing required field '") + field + "'");
        }
    }
    if (!j.at("label").is_number_integer()) {
        throw ValidationError("label must be the integer 0 or 1");
    }
    Sample s{
        .id = j.at("id").get<std::string>(),
        .lang = LanguageCode(j.at("lang").get<std::string>(), registry),
        .text = j.at("text").get<std::string>(),
        .label = j.at("label").get<int>(),
        .source = source_from_string(j.at("source").get<std::string>()),
    };
    if (j.contains("strategy")) {
        s.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    }
    if (j.contains("topic")) {
        s.topic = j.at("topic").get<std::string>();
    }
    if (j.contains("parent_id")) {
        s.parent_id = j.at("parent_id").get<std::string>();
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!is_known_sample_field(it.key())) {
            s.extra[it.key()] = it.value();
        }
    }
    validate_sample(s);
    return s;
}

nlohmann::json sample_to_json(const Sample& s) {
    nlohmann::json j = s.extra.is_object() ? s.extra : nlohmann::json::object();
    j["id"] = s.id;
    j["lang"] = s.lang.str();
    j["label"] = s.label;
    j["text"] = s.text;
    j["source"] = to_string(s.source);
    if (s.strategy) j["strategy"] = to_string(*s.strategy);
    if (s.topic) j["topic"] = *s.topic;
    if (s.parent_id) j["parent_id"] = *s.parent_id;
    return j;
}

Dataset read_dataset(const std::filesystem::path& path, const LanguageRegistry& registry) {
    auto in = open_in(path);
    std::vector<Sample> samples;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_is_blank(line)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            line_error(path, line_no, std::string("JSON parse error: ") + e.what());
        }
        std::optional<Sample> s;
        try {
            s = sample_from_json(j, registry);
        } catch (const ValidationError& e) {
            line_error(path, line_no, e.what());
        }
        if (!seen_ids.insert(s->id).second) {
            line_error(path, line_no, "duplicate id '" + s->id + "'");
        }
        samples.push_back(std::move(*s));
    }
    return Dataset::from_samples(std::move(samples));
}

void write_dataset(const Dataset& d, const std::filesystem::path& path) {
    auto out = open_out(path);
    for (const auto& s : d.samples) {
        out << sample_to_json(s).dump() << '\n';
    }
    if (!out) {
        throw ConfigError("write failed: " + path.string());
    }
}

PredictionSet read_predictions(const std::filesystem::path& path,
                               const LanguageRegistry& registry) {
    auto in = open_in(path);
    std::string line;
    size_t line_no = 0;

    // Header line: {"lang": ..., "model": ...}
    do {
        if (!std::getline(in, line)) {
            throw ValidationError(path.string() + ": missing prediction header line");
        }
        ++line_no;
    } while (line_is_blank(line));

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        line_error(path, line_no, std::string("header parse error: ") + e.what());
    }
    if (!header.contains("lang") || !header.contains("model")) {
        line_error(path, line_no, "prediction header must carry 'lang' and 'model'");
    }

    std::optional<PredictionSet> parsed;
    try {
        parsed = PredictionSet{.lang = LanguageCode(header.at("lang").get<std::string>(), registry),
                               .model = header.at("model").get<std::string>(),
                               .records = {}};
    } catch (const ValidationError& e) {
        line_error(path, line_no, e.what());
    }
    PredictionSet& p = *parsed;

    std::unordered_set<std::string> seen_ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_is_blank(line)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            line_error(path, line_no, std::string("JSON parse error: ") + e.what());
        }
        if (!j.contains("id") || !j.contains("prob")) {
            line_error(path, line_no, "prediction line must carry 'id' and 'prob'");
        }
        PredictionRecord r{.id = j.at("id").get<std::string>(),
                           .prob = j.at("prob").get<double>()};
        if (r.prob < 0.0 || r.prob > 1.0) {
            line_error(path, line_no, "prob must lie in [0,1]");
        }
        if (!seen_ids.insert(r.id).second) {
            line_error(path, line_no, "duplicate id '" + r.id + "'");
        }
        p.records.push_back(std::move(r));
    }
    return p;
}

void write_predictions(const PredictionSet& p, const std::filesystem::path& path) {
    auto out = open_out(path);
    nlohmann::json header{{"lang", p.lang.str()}, {"model", p.model}};
    out << header.dump() << '\n';
    for (const auto& r : p.records) {
        nlohmann::json j{{"id", r.id}, {"prob", r.prob}};
        out << j.dump() << '\n';
    }
    if (!out) {
        throw ConfigError("write failed: " + path.string());
    }
}

AlignedPairs align(const Dataset& d, const PredictionSet& p) {
    std::unordered_map<std::string, double> by_id;
    by_id.reserve(p.records.size());
    for (const auto& r : p.records) {
        by_id.emplace(r.id, r.prob);
    }

    AlignedPairs out;
    std::vector<std::string> missing;
    std::unordered_set<std::string> used;
    for (const auto& s : d.samples) {
        auto it = by_id.find(s.id);
        if (it == by_id.end()) {
            missing.push_back(s.id);
            continue;
        }
        used.insert(s.id);
        out.labels.push_back(s.label);
        out.probs.push_back(it->second);
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "missing predictions for " << missing.size() << " id(s):";
        for (const auto& id : missing) msg << " '" << id << "'";
        throw ValidationError(msg.str());
    }
    for (const auto& r : p.records) {
        if (!used.count(r.id)) {
            out.orphan_ids.push_back(r.id);
        }
    }
    return out;
}

}  // namespace polar
