#include "polar/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "polar/numeric.hpp"
#include "polar/rng.hpp"

namespace polar {

TopicCatalog TopicCatalog::builtin() {
    return TopicCatalog{{
        {"political",
         {"elections", "government corruption", "immigration policy", "press freedom",
          "protest movements", "political parties"}},
        {"ethnic/racial",
         {"ethnic minorities", "racial discrimination", "indigenous rights",
          "migrant communities", "ethnic conflict", "cultural assimilation"}},
        {"religious",
         {"religious minorities", "interfaith relations", "religious law", "secularism",
          "places of worship", "religious conversion"}},
        {"social class",
         {"wealth inequality", "labor rights", "housing affordability", "access to education",
          "unemployment", "rural-urban divide"}},
        {"international relations",
         {"border disputes", "trade sanctions", "foreign aid", "military alliances",
          "refugees", "international organizations"}},
    }};
}

TopicCatalog TopicCatalog::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open topic catalog: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("topic catalog parse error in " + path.string() + ": " + e.what());
    }
    TopicCatalog catalog;
    for (const auto& cat : j.at("categories")) {
        catalog.categories.push_back({cat.at("name").get<std::string>(),
                                      cat.at("topics").get<std::vector<std::string>>()});
    }
    catalog.validate();
    return catalog;
}

void TopicCatalog::validate() const {
    if (categories.empty()) {
        throw ConfigError("topic catalog must have at least one category");
    }
    for (const auto& c : categories) {
        if (c.name.empty() || c.topics.empty()) {
            throw ConfigError("topic catalog categories need a name and at least one topic");
        }
    }
}

size_t TopicCatalog::topic_count() const {
    size_t n = 0;
    for (const auto& c : categories) n += c.topics.size();
    return n;
}

std::vector<std::string> PromptSpec::required_placeholders(Strategy s) {
    switch (s) {
        case Strategy::direct: return {"language", "topic", "target_label"};
        case Strategy::paraphrase: return {"language", "original_text"};
        case Strategy::contrastive: return {"language", "topic"};
        default: return {};
    }
}

void PromptSpec::validate() const {
    if (!(temperature > 0.0 && temperature <= 2.0)) {
        throw ConfigError("prompt temperature must lie in (0,2]");
    }
    if (max_tokens < 1) {
        throw ConfigError("prompt max_tokens must be positive");
    }
    for (const auto& ph : required_placeholders(strategy)) {
        if (template_text.find("{" + ph + "}") == std::string::npos) {
            throw ConfigError("prompt template for " + to_string(strategy) +
                              " is missing placeholder {" + ph + "}");
        }
    }
}

std::string PromptSpec::render(const std::map<std::string, std::string>& values) const {
    std::string out;
    out.reserve(template_text.size());
    size_t pos = 0;
    while (pos < template_text.size()) {
        const size_t open = template_text.find('{', pos);
        if (open == std::string::npos) {
            out.append(template_text, pos, std::string::npos);
            break;
        }
        const size_t close = template_text.find('}', open);
        if (close == std::string::npos) {
            out.append(template_text, pos, std::string::npos);
            break;
        }
        out.append(template_text, pos, open - pos);
        const std::string key = template_text.substr(open + 1, close - open - 1);
        auto it = values.find(key);
        if (it == values.end()) {
            throw ConfigError("prompt template references unknown placeholder {" + key + "}");
        }
        out.append(it->second);
        pos = close + 1;
    }
    return out;
}

namespace {

constexpr const char* kDirectTemplate =
    "You are creating training data for a social media polarization classifier.\n"
    "Polarized content vilifies, stereotypes, dehumanizes, or shows intolerance toward a "
    "group, often with an us-vs-them framing. Non-polarized content discusses the same kinds "
    "of topics in a neutral or balanced way without vilifying anyone.\n"
    "\n"
    "Write one {target_label} social media post in {language} about: {topic}.\n"
    "\n"
    "Requirements:\n"
    "- If polarized: the post targets a specific group with vilifying, stereotyping, or "
    "dehumanizing language and shows an us-vs-them mentality.\n"
    "- If non-polarized: the post stays neutral and balanced and does not vilify anyone.\n"
    "- The post must read like an authentic social media post written natively in "
    "{language}.\n"
    "\n"
    "Output only the post text in {language}. No labels, no explanations, no "
    "meta-commentary.\n";

constexpr const char* kParaphraseTemplate =
    "Rewrite the following social media post in {language} using different words and "
    "phrasing while keeping exactly the same meaning, sentiment, and level of polarization. "
    "Stay within 20% of the original word count and use natural {language} expressions.\n"
    "\n"
    "Original post:\n"
    "{original_text}\n"
    "\n"
    "Output only the rewritten post in {language}. No labels, no explanations, no "
    "meta-commentary.\n";

constexpr const char* kContrastiveTemplate =
    "Write two versions of a social media post in {language} about: {topic}.\n"
    "\n"
    "The first version is polarized: it contains vilification, stereotyping, or an "
    "us-vs-them mentality toward a group. The second version is non-polarized: neutral, "
    "balanced viewpoints on the same topic without vilifying anyone. Both versions must "
    "discuss the same topic, be similar in length (30 to 60 words), and feel authentic in "
    "{language}.\n"
    "\n"
    "Respond in exactly this format:\n"
    "POLARIZED: <first version>\n"
    "NON_POLARIZED: <second version>\n"
    "\n"
    "No other labels, explanations, or meta-commentary.\n";

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open prompt template: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

PromptLibrary PromptLibrary::builtin() {
    PromptLibrary lib;
    lib.direct = {Strategy::direct, 0.9, 250, kDirectTemplate};
    lib.paraphrase = {Strategy::paraphrase, 0.7, 250, kParaphraseTemplate};
    lib.contrastive = {Strategy::contrastive, 0.8, 500, kContrastiveTemplate};
    lib.direct.validate();
    lib.paraphrase.validate();
    lib.contrastive.validate();
    return lib;
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& dir) {
    PromptLibrary lib = builtin();
    lib.direct.template_text = read_text_file(dir / "direct.txt");
    lib.paraphrase.template_text = read_text_file(dir / "paraphrase.txt");
    lib.contrastive.template_text = read_text_file(dir / "contrastive.txt");
    lib.direct.validate();
    lib.paraphrase.validate();
    lib.contrastive.validate();
    return lib;
}

const PromptSpec& PromptLibrary::for_strategy(Strategy s) const {
    switch (s) {
        case Strategy::direct: return direct;
        case Strategy::paraphrase: return paraphrase;
        case Strategy::contrastive: return contrastive;
        default:
            throw ConfigError("no prompt template for strategy " + to_string(s));
    }
}

MixCounts allocate_mix(long total_n, const StrategyMix& mix) {
    if (total_n < 0) {
        throw ConfigError("allocate_mix: total_n must be non-negative");
    }
    const double sum = mix.direct + mix.paraphrase + mix.contrastive;
    if (std::abs(sum - 1.0) > 1e-9 || mix.direct < 0 || mix.paraphrase < 0 ||
        mix.contrastive < 0) {
        throw ConfigError("allocate_mix: strategy mix must be non-negative and sum to 1");
    }

    // Largest-remainder apportionment, ties by strategy order
    // direct < paraphrase < contrastive.
    const double shares[3] = {mix.direct, mix.paraphrase, mix.contrastive};
    long counts[3];
    double fracs[3];
    long assigned = 0;
    for (int i = 0; i < 3; ++i) {
        const double exact = shares[i] * static_cast<double>(total_n);
        counts[i] = floor_share(exact);
        fracs[i] = exact - static_cast<double>(counts[i]);
        assigned += counts[i];
    }
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int a, int b) {
        if (fracs[a] != fracs[b]) return fracs[a] > fracs[b];
        return a < b;
    });
    long leftover = total_n - assigned;  // at most 2 for three strategies
    for (int k = 0; k < 3 && leftover > 0; ++k) {
        ++counts[order[k]];
        --leftover;
    }

    MixCounts out{counts[0], counts[1], counts[2]};

    // Contrastive generation emits pairs: round down to even, odd
    // remainder moves to direct.
    if (out.contrastive_n % 2 != 0) {
        out.contrastive_n -= 1;
        out.direct_n += 1;
    }
    return out;
}

GenerationBatchPlan plan_batch(const LanguageCode& lang, long total_n, const RunConfig& cfg,
                               DirectLabelAllocation alloc, const Dataset* real_train) {
    GenerationBatchPlan plan{.lang = lang, .total_n = total_n,
                             .counts = allocate_mix(total_n, cfg.strategy_mix),
                             .label_allocation = alloc};

    if (alloc == DirectLabelAllocation::balanced) {
        plan.direct_polarized = (plan.counts.direct_n + 1) / 2;
        plan.direct_non_polarized = plan.counts.direct_n - plan.direct_polarized;
        return plan;
    }

    if (real_train == nullptr || real_train->empty()) {
        throw ConfigError("counter_imbalance allocation needs a non-empty real training set");
    }
    long n1 = 0;
    for (const auto& s : real_train->samples) {
        if (s.label == 1) ++n1;
    }
    // Flip the observed distribution so the minority class gets the
    // majority of the direct budget.
    const double share1 =
        1.0 - static_cast<double>(n1) / static_cast<double>(real_train->size());
    const double exact1 = share1 * static_cast<double>(plan.counts.direct_n);
    long pol = floor_share(exact1);
    const double frac1 = exact1 - static_cast<double>(pol);
    if (frac1 > 1e-9 && frac1 >= 1.0 - frac1) {
        ++pol;  // larger remainder wins the leftover slot, ties to polarized
    }
    plan.direct_polarized = pol;
    plan.direct_non_polarized = plan.counts.direct_n - pol;
    return plan;
}

namespace {

std::string strip_completion(const std::string& raw) {
    auto is_ws = [](unsigned char c) { return std::isspace(c) != 0; };
    size_t begin = 0, end = raw.size();
    while (begin < end && is_ws(raw[begin])) ++begin;
    while (end > begin && is_ws(raw[end - 1])) --end;
    std::string s = raw.substr(begin, end - begin);

    auto strip_pair = [&s](const std::string& open, const std::string& close) {
        if (s.size() >= open.size() + close.size() && s.rfind(open, 0) == 0 &&
            s.compare(s.size() - close.size(), close.size(), close) == 0) {
            s = s.substr(open.size(), s.size() - open.size() - close.size());
            return true;
        }
        return false;
    };
    if (strip_pair("\"", "\"") || strip_pair("'", "'") ||
        strip_pair("“", "”")) {
        size_t b = 0, e = s.size();
        while (b < e && is_ws(s[b])) ++b;
        while (e > b && is_ws(s[e - 1])) --e;
        s = s.substr(b, e - b);
    }
    return s;
}

std::string require_completion(std::string text, const std::string& what) {
    if (text.empty()) {
        throw ServiceError(what + ": empty completion");
    }
    return text;
}

}  // namespace

Sample generate_direct(const LanguageCode& lang, int target_label, const std::string& topic,
                       ChatClient& client, const PromptLibrary& prompts, const RunConfig& cfg,
                       const std::string& id) {
    if (target_label != 0 && target_label != 1) {
        throw ValidationError("generate_direct: target label must be 0 or 1");
    }
    const PromptSpec& spec = prompts.direct;
    const std::string prompt =
        spec.render({{"language", lang.str()},
                     {"topic", topic},
                     {"target_label", target_label == 1 ? "polarized" : "non-polarized"}});
    const std::string text = require_completion(
        strip_completion(client.complete({cfg.endpoints.chat_model, prompt, spec.temperature,
                                          spec.max_tokens})),
        "direct generation");
    Sample s{.id = id,
             .lang = lang,
             .text = text,
             .label = target_label,
             .source = Source::synthetic,
             .strategy = Strategy::direct,
             .topic = topic};
    return s;
}

Sample generate_paraphrase(const Sample& original, ChatClient& client,
                           const PromptLibrary& prompts, const RunConfig& cfg,
                           const std::string& id) {
    if (original.source != Source::real) {
        throw ValidationError("generate_paraphrase: original must be a real sample");
    }
    const PromptSpec& spec = prompts.paraphrase;
    const std::string prompt = spec.render(
        {{"language", original.lang.str()}, {"original_text", original.text}});
    const std::string text = require_completion(
        strip_completion(client.complete({cfg.endpoints.chat_model, prompt, spec.temperature,
                                          spec.max_tokens})),
        "paraphrase generation");
    Sample s{.id = id,
             .lang = original.lang,
             .text = text,
             .label = original.label,
             .source = Source::synthetic,
             .strategy = Strategy::paraphrase,
             .topic = original.topic,
             .parent_id = original.id};
    return s;
}

std::pair<Sample, Sample> generate_contrastive(const LanguageCode& lang, const std::string& topic,
                                               ChatClient& client, const PromptLibrary& prompts,
                                               const RunConfig& cfg,
                                               const std::string& id_polarized,
                                               const std::string& id_non_polarized) {
    const PromptSpec& spec = prompts.contrastive;
    const std::string prompt =
        spec.render({{"language", lang.str()}, {"topic", topic}});
    const std::string completion = client.complete(
        {cfg.endpoints.chat_model, prompt, spec.temperature, spec.max_tokens});
    std::pair<std::string, std::string> texts;
    try {
        texts = parse_contrastive(completion);
    } catch (const ValidationError& e) {
        throw ServiceError(std::string("contrastive completion unusable: ") + e.what());
    }
    Sample pol{.id = id_polarized,
               .lang = lang,
               .text = texts.first,
               .label = 1,
               .source = Source::synthetic,
               .strategy = Strategy::contrastive,
               .topic = topic};
    Sample non{.id = id_non_polarized,
               .lang = lang,
               .text = texts.second,
               .label = 0,
               .source = Source::synthetic,
               .strategy = Strategy::contrastive,
               .topic = topic};
    return {std::move(pol), std::move(non)};
}

namespace {

// Case-insensitive marker at the start of a (whitespace-trimmed) line.
// Returns the text after the marker, or nullopt.
std::optional<std::string> match_marker(const std::string& line,
                                        std::initializer_list<const char*> markers) {
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) return std::nullopt;
    for (const char* marker : markers) {
        const size_t len = std::strlen(marker);
        if (line.size() - start < len) continue;
        bool match = true;
        for (size_t i = 0; i < len; ++i) {
            if (std::toupper(static_cast<unsigned char>(line[start + i])) !=
                std::toupper(static_cast<unsigned char>(marker[i]))) {
                match = false;
                break;
            }
        }
        if (match) {
            return line.substr(start + len);
        }
    }
    return std::nullopt;
}

std::string trim_copy(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

std::pair<std::string, std::string> parse_contrastive(const std::string& completion) {
    enum class Section { before, polarized, non_polarized };
    Section section = Section::before;
    std::vector<std::string> pol_lines, non_lines;

    std::istringstream in(completion);
    std::string line;
    while (std::getline(in, line)) {
        // NON_ first: both tests are prefix checks and POLARIZED: is a
        // substring of the NON markers' tails, not their heads, but being
        // explicit costs nothing.
        if (auto rest = match_marker(line, {"NON_POLARIZED:", "NON-POLARIZED:"})) {
            if (section == Section::before) {
                throw ValidationError(
                    "contrastive completion: NON_POLARIZED: before POLARIZED: (reversed order)");
            }
            if (section == Section::non_polarized) {
                throw ValidationError("contrastive completion: duplicate NON_POLARIZED: marker");
            }
            section = Section::non_polarized;
            if (!trim_copy(*rest).empty()) non_lines.push_back(trim_copy(*rest));
            continue;
        }
        if (auto rest = match_marker(line, {"POLARIZED:"})) {
            if (section != Section::before) {
                throw ValidationError(
                    "contrastive completion: POLARIZED: marker out of order");
            }
            section = Section::polarized;
            if (!trim_copy(*rest).empty()) pol_lines.push_back(trim_copy(*rest));
            continue;
        }
        const std::string t = trim_copy(line);
        if (t.empty()) continue;
        if (section == Section::polarized) pol_lines.push_back(t);
        else if (section == Section::non_polarized) non_lines.push_back(t);
        // Text before any marker is preamble; ignore it.
    }

    if (section == Section::before) {
        throw ValidationError("contrastive completion: missing POLARIZED: marker");
    }
    if (section == Section::polarized) {
        throw ValidationError("contrastive completion: missing NON_POLARIZED: marker");
    }

    auto join = [](const std::vector<std::string>& lines) {
        std::string out;
        for (const auto& l : lines) {
            if (!out.empty()) out += ' ';
            out += l;
        }
        return out;
    };
    const std::string pol = join(pol_lines);
    const std::string non = join(non_lines);
    if (pol.empty()) {
        throw ValidationError("contrastive completion: empty POLARIZED segment");
    }
    if (non.empty()) {
        throw ValidationError("contrastive completion: empty NON_POLARIZED segment");
    }
    return {pol, non};
}

std::string backtranslate(const std::string& text, const LanguageCode& lang,
                          const std::vector<std::string>& pivots, TranslationClient& client) {
    if (pivots.empty()) {
        throw ConfigError("backtranslate: pivot chain must not be empty");
    }
    std::vector<std::string> chain;
    chain.push_back(lang.str());
    chain.insert(chain.end(), pivots.begin(), pivots.end());
    chain.push_back(lang.str());

    std::string current = text;
    for (size_t hop = 0; hop + 1 < chain.size(); ++hop) {
        try {
            current = client.translate(current, chain[hop], chain[hop + 1]);
        } catch (const ServiceError& e) {
            throw ServiceError("backtranslate hop " + std::to_string(hop + 1) + " (" +
                               chain[hop] + "->" + chain[hop + 1] + "): " + e.what());
        }
    }
    return current;
}

namespace {

struct GenTask {
    Strategy strategy;
    int target_label = 1;             // direct
    std::string topic;                // direct, contrastive
    const Sample* parent = nullptr;   // paraphrase
    std::string id;                   // first (or only) sample id
    std::string id_second;            // contrastive pair partner
};

std::string task_id(const LanguageCode& lang, Strategy strategy, long seq) {
    std::ostringstream out;
    out << "syn-" << lang.str() << '-' << to_string(strategy) << '-';
    out.width(5);
    out.fill('0');
    out << seq;
    return out.str();
}

std::string pick_topic(const TopicCatalog& topics, SplitMix64& stream) {
    const auto& cat =
        topics.categories[stream.next_below(topics.categories.size())];
    return cat.topics[stream.next_below(cat.topics.size())];
}

std::vector<GenTask> build_tasks(const GenerationBatchPlan& plan, const Dataset* real_train,
                                 const TopicCatalog& topics, const RunConfig& cfg) {
    topics.validate();
    std::vector<GenTask> tasks;
    tasks.reserve(static_cast<size_t>(plan.counts.direct_n + plan.counts.paraphrase_n +
                                      plan.counts.contrastive_n / 2));

    // Direct: alternate polarized / non-polarized while both budgets last.
    {
        auto stream = seeded_stream(cfg.seed, {plan.lang.str(), "direct"});
        long remaining_pol = plan.direct_polarized;
        long remaining_non = plan.direct_non_polarized;
        long seq = 1;
        bool want_pol = true;
        while (remaining_pol + remaining_non > 0) {
            int label;
            if (remaining_pol > 0 && (want_pol || remaining_non == 0)) {
                label = 1;
                --remaining_pol;
            } else {
                label = 0;
                --remaining_non;
            }
            want_pol = !want_pol;
            tasks.push_back({.strategy = Strategy::direct,
                             .target_label = label,
                             .topic = pick_topic(topics, stream),
                             .id = task_id(plan.lang, Strategy::direct, seq++)});
        }
    }

    // Paraphrase: parents drawn without replacement from the id-sorted
    // real samples, cycling if the budget exceeds the pool.
    if (plan.counts.paraphrase_n > 0) {
        if (real_train == nullptr) {
            throw ConfigError("paraphrase generation needs the real training set");
        }
        std::vector<const Sample*> parents;
        for (const auto& s : real_train->samples) {
            if (s.source == Source::real) parents.push_back(&s);
        }
        if (parents.empty()) {
            throw ConfigError("paraphrase generation needs real samples to paraphrase");
        }
        std::sort(parents.begin(), parents.end(),
                  [](const Sample* a, const Sample* b) { return a->id < b->id; });
        auto stream = seeded_stream(cfg.seed, {plan.lang.str(), "paraphrase"});
        fisher_yates(parents, stream);
        for (long i = 0; i < plan.counts.paraphrase_n; ++i) {
            tasks.push_back({.strategy = Strategy::paraphrase,
                             .parent = parents[static_cast<size_t>(i) % parents.size()],
                             .id = task_id(plan.lang, Strategy::paraphrase, i + 1)});
        }
    }

    // Contrastive: one task per pair.
    {
        auto stream = seeded_stream(cfg.seed, {plan.lang.str(), "contrastive"});
        for (long pair = 0; pair < plan.counts.contrastive_n / 2; ++pair) {
            tasks.push_back({.strategy = Strategy::contrastive,
                             .topic = pick_topic(topics, stream),
                             .id = task_id(plan.lang, Strategy::contrastive, 2 * pair + 1),
                             .id_second =
                                 task_id(plan.lang, Strategy::contrastive, 2 * pair + 2)});
        }
    }
    return tasks;
}

}  // namespace

std::vector<PlannedRequest> plan_requests(const GenerationBatchPlan& plan,
                                          const Dataset* real_train,
                                          const TopicCatalog& topics,
                                          const PromptLibrary& prompts, const RunConfig& cfg) {
    std::vector<PlannedRequest> out;
    for (const auto& task : build_tasks(plan, real_train, topics, cfg)) {
        const PromptSpec& spec = prompts.for_strategy(task.strategy);
        std::map<std::string, std::string> values{{"language", plan.lang.str()}};
        switch (task.strategy) {
            case Strategy::direct:
                values["topic"] = task.topic;
                values["target_label"] = task.target_label == 1 ? "polarized" : "non-polarized";
                break;
            case Strategy::paraphrase:
                values["original_text"] = task.parent->text;
                break;
            case Strategy::contrastive:
                values["topic"] = task.topic;
                break;
            default:
                break;
        }
        out.push_back({task.strategy, spec.render(values), spec.temperature, spec.max_tokens});
    }
    return out;
}

BatchResult generate_batch(const GenerationBatchPlan& plan, const Dataset* real_train,
                           ChatClient& client, const TopicCatalog& topics,
                           const PromptLibrary& prompts, const RunConfig& cfg) {
    const auto tasks = build_tasks(plan, real_train, topics, cfg);
    std::vector<std::vector<Sample>> slots(tasks.size());

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size() || failed.load()) return;
            const GenTask& task = tasks[i];
            try {
                switch (task.strategy) {
                    case Strategy::direct:
                        slots[i].push_back(generate_direct(plan.lang, task.target_label,
                                                           task.topic, client, prompts, cfg,
                                                           task.id));
                        break;
                    case Strategy::paraphrase:
                        slots[i].push_back(
                            generate_paraphrase(*task.parent, client, prompts, cfg, task.id));
                        break;
                    case Strategy::contrastive: {
                        auto pair = generate_contrastive(plan.lang, task.topic, client, prompts,
                                                         cfg, task.id, task.id_second);
                        slots[i].push_back(std::move(pair.first));
                        slots[i].push_back(std::move(pair.second));
                        break;
                    }
                    default:
                        break;
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };

    const size_t n_workers =
        std::min<size_t>(static_cast<size_t>(std::max(1, cfg.concurrency_limit)), tasks.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }

    BatchResult result;
    result.samples.lang = plan.lang;
    result.request_count = static_cast<long>(tasks.size());
    for (auto& slot : slots) {
        for (auto& s : slot) {
            validate_sample(s);
            result.samples.samples.push_back(std::move(s));
        }
    }
    return result;
}

}  // namespace polar
