#include <doctest.h>

#include <fstream>
#include <set>

#include "polar/io.hpp"
#include "polar/rng.hpp"
#include "polar/synth.hpp"
#include "polar/types.hpp"
#include "support.hpp"

using namespace polar;
using testsupport::TempDir;

namespace {

// Deterministic stand-in for the chat endpoint: the reply is a pure
// function of the prompt, so batches reproduce byte-for-byte.
class FakeChatClient : public ChatClient {
public:
    std::string complete(const ChatRequest& request) override {
        const auto tag = std::to_string(fnv1a64(request.user_content) % 100000);
        if (request.user_content.find("POLARIZED: <first version>") != std::string::npos) {
            return "POLARIZED: generated polarized text " + tag +
                   "\nNON_POLARIZED: generated neutral text " + tag;
        }
        return "generated text " + tag;
    }
};

class EchoTranslationClient : public TranslationClient {
public:
    int calls = 0;
    std::vector<std::pair<std::string, std::string>> hops;
    int fail_on_call = -1;

    std::string translate(const std::string& text, const std::string& source,
                          const std::string& target) override {
        ++calls;
        hops.emplace_back(source, target);
        if (calls == fail_on_call) {
            throw ServiceError("unsupported language pair " + source + "->" + target);
        }
        return text;  // identity pivot
    }
};

Dataset small_real_set(int n) {
    Dataset d;
    d.lang = LanguageCode("khm");
    for (int i = 0; i < n; ++i) {
        d.samples.push_back(Sample{.id = "r" + std::to_string(i),
                                   .lang = LanguageCode("khm"),
                                   .text = "real training sample number " + std::to_string(i),
                                   .label = i % 2});
    }
    return d;
}

}  // namespace

TEST_CASE("allocate_mix: paper split, zero, and remainder handling") {
    StrategyMix mix;  // 50/30/20
    SUBCASE("1000 splits 500/300/200") {
        const auto c = allocate_mix(1000, mix);
        CHECK(c.direct_n == 500);
        CHECK(c.paraphrase_n == 300);
        CHECK(c.contrastive_n == 200);
    }
    SUBCASE("zero total") {
        const auto c = allocate_mix(0, mix);
        CHECK(c.total() == 0);
    }
    SUBCASE("7 becomes 5/2/0 after the even-pair rule") {
        const auto c = allocate_mix(7, mix);
        CHECK(c.direct_n == 5);
        CHECK(c.paraphrase_n == 2);
        CHECK(c.contrastive_n == 0);
    }
    SUBCASE("counts always sum to total and contrastive stays even") {
        for (long n = 0; n <= 200; ++n) {
            const auto c = allocate_mix(n, mix);
            CHECK(c.total() == n);
            CHECK(c.contrastive_n % 2 == 0);
        }
    }
    SUBCASE("bad mix rejected") {
        CHECK_THROWS_AS(allocate_mix(10, StrategyMix{0.5, 0.5, 0.5}), ConfigError);
    }
}

TEST_CASE("plan_batch label allocation") {
    RunConfig cfg;
    const LanguageCode khm("khm");

    SUBCASE("balanced splits the direct budget 50/50") {
        const auto plan = plan_batch(khm, 1000, cfg);
        CHECK(plan.counts.direct_n == 500);
        CHECK(plan.direct_polarized == 250);
        CHECK(plan.direct_non_polarized == 250);
    }
    SUBCASE("odd direct budget leans polarized") {
        RunConfig odd_cfg;
        odd_cfg.strategy_mix = {1.0, 0.0, 0.0};
        const auto plan = plan_batch(khm, 7, odd_cfg);
        CHECK(plan.counts.direct_n == 7);
        CHECK(plan.direct_polarized == 4);
        CHECK(plan.direct_non_polarized == 3);
    }
    SUBCASE("counter_imbalance flips the real distribution") {
        // 80% positive real data -> 80% of direct budget goes negative
        Dataset real;
        real.lang = khm;
        for (int i = 0; i < 10; ++i) {
            real.samples.push_back(Sample{.id = "r" + std::to_string(i),
                                          .lang = khm,
                                          .text = "imbalanced real sample text",
                                          .label = i < 8 ? 1 : 0});
        }
        const auto plan =
            plan_batch(khm, 1000, cfg, DirectLabelAllocation::counter_imbalance, &real);
        CHECK(plan.direct_polarized == 100);
        CHECK(plan.direct_non_polarized == 400);
    }
    SUBCASE("counter_imbalance without data is an error") {
        CHECK_THROWS_AS(plan_batch(khm, 10, cfg, DirectLabelAllocation::counter_imbalance),
                        ConfigError);
    }
}

TEST_CASE("prompt templates validate their placeholders") {
    const auto lib = PromptLibrary::builtin();
    CHECK(lib.direct.temperature == 0.9);
    CHECK(lib.direct.max_tokens == 250);
    CHECK(lib.paraphrase.temperature == 0.7);
    CHECK(lib.paraphrase.max_tokens == 250);
    CHECK(lib.contrastive.temperature == 0.8);
    CHECK(lib.contrastive.max_tokens == 500);

    PromptSpec broken = lib.direct;
    broken.template_text = "no placeholders at all";
    CHECK_THROWS_AS(broken.validate(), ConfigError);

    broken = lib.direct;
    broken.temperature = 0.0;
    CHECK_THROWS_AS(broken.validate(), ConfigError);

    SUBCASE("render substitutes and rejects unknown placeholders") {
        PromptSpec spec{Strategy::contrastive, 0.8, 500, "write about {topic} in {language}"};
        CHECK(spec.render({{"topic", "refugees"}, {"language", "khm"}}) ==
              "write about refugees in khm");
        CHECK_THROWS_AS(spec.render({{"language", "khm"}}), ConfigError);
    }
}

TEST_CASE("shipped prompt files match the builtin templates") {
    const auto shipped = PromptLibrary::load(std::filesystem::path(POLAR_DATA_DIR) / "prompts");
    const auto builtin = PromptLibrary::builtin();
    CHECK(shipped.direct.template_text == builtin.direct.template_text);
    CHECK(shipped.paraphrase.template_text == builtin.paraphrase.template_text);
    CHECK(shipped.contrastive.template_text == builtin.contrastive.template_text);
}

TEST_CASE("shipped topic catalog matches the builtin and the 5x6 shape") {
    const auto shipped = TopicCatalog::load(std::filesystem::path(POLAR_DATA_DIR) / "topics.json");
    const auto builtin = TopicCatalog::builtin();
    REQUIRE(shipped.categories.size() == 5);
    CHECK(shipped.topic_count() == 30);
    for (size_t i = 0; i < 5; ++i) {
        CHECK(shipped.categories[i].name == builtin.categories[i].name);
        CHECK(shipped.categories[i].topics == builtin.categories[i].topics);
        CHECK(shipped.categories[i].topics.size() == 6);
    }
}

TEST_CASE("generate_direct strips quotes and records metadata") {
    RunConfig cfg;
    cfg.endpoints.chat_model = "test-model";
    const auto lib = PromptLibrary::builtin();

    struct QuotingClient : ChatClient {
        std::string reply;
        std::string complete(const ChatRequest&) override { return reply; }
    } client;

    client.reply = "  \"a quoted generation\"  ";
    const auto s = generate_direct(LanguageCode("khm"), 1, "refugees", client, lib, cfg, "id1");
    CHECK(s.text == "a quoted generation");
    CHECK(s.label == 1);
    CHECK(s.strategy == Strategy::direct);
    CHECK(s.topic == "refugees");
    CHECK(s.source == Source::synthetic);

    SUBCASE("empty completion is an error") {
        client.reply = "   ";
        CHECK_THROWS_AS(generate_direct(LanguageCode("khm"), 0, "refugees", client, lib, cfg, "x"),
                        ServiceError);
    }
}

TEST_CASE("generate_paraphrase preserves label and records the parent") {
    RunConfig cfg;
    cfg.endpoints.chat_model = "test-model";
    const auto lib = PromptLibrary::builtin();
    FakeChatClient client;

    Sample original{.id = "orig-7",
                    .lang = LanguageCode("khm"),
                    .text = "original real text to reword",
                    .label = 0};
    const auto s = generate_paraphrase(original, client, lib, cfg, "para-1");
    CHECK(s.label == 0);
    CHECK(s.parent_id == "orig-7");
    CHECK(s.strategy == Strategy::paraphrase);

    SUBCASE("synthetic originals are rejected") {
        original.source = Source::synthetic;
        original.strategy = Strategy::direct;
        CHECK_THROWS_AS(generate_paraphrase(original, client, lib, cfg, "x"), ValidationError);
    }
}

TEST_CASE("parse_contrastive fixture suite") {
    SUBCASE("canonical two-line block") {
        const auto [pol, non] = parse_contrastive("POLARIZED: A\nNON_POLARIZED: B");
        CHECK(pol == "A");
        CHECK(non == "B");
    }
    SUBCASE("hyphen marker variant accepted") {
        const auto [pol, non] = parse_contrastive("POLARIZED: A\nNON-POLARIZED: B");
        CHECK(non == "B");
    }
    SUBCASE("case-insensitive markers") {
        const auto [pol, non] = parse_contrastive("polarized: A\nnon_polarized: B");
        CHECK(pol == "A");
    }
    SUBCASE("multi-line segments join with single spaces") {
        const auto [pol, non] = parse_contrastive(
            "POLARIZED: first line\nsecond line\nthird line\nNON_POLARIZED: other text");
        CHECK(pol == "first line second line third line");
        CHECK(non == "other text");
    }
    SUBCASE("leading whitespace before markers tolerated") {
        const auto [pol, non] = parse_contrastive("  POLARIZED: A\n  NON_POLARIZED: B");
        CHECK(pol == "A");
        CHECK(non == "B");
    }
    SUBCASE("preamble before the first marker is ignored") {
        const auto [pol, non] =
            parse_contrastive("Here are the two versions:\nPOLARIZED: A\nNON_POLARIZED: B");
        CHECK(pol == "A");
    }
    SUBCASE("missing NON_POLARIZED marker") {
        CHECK_THROWS_WITH_AS(parse_contrastive("POLARIZED: only this"),
                             doctest::Contains("missing NON_POLARIZED:"), ValidationError);
    }
    SUBCASE("missing POLARIZED marker") {
        CHECK_THROWS_WITH_AS(parse_contrastive("no markers in here at all"),
                             doctest::Contains("missing POLARIZED:"), ValidationError);
    }
    SUBCASE("reversed order rejected") {
        CHECK_THROWS_WITH_AS(parse_contrastive("NON_POLARIZED: B\nPOLARIZED: A"),
                             doctest::Contains("reversed"), ValidationError);
    }
    SUBCASE("empty polarized segment rejected") {
        CHECK_THROWS_WITH_AS(parse_contrastive("POLARIZED:\nNON_POLARIZED: B"),
                             doctest::Contains("empty POLARIZED"), ValidationError);
    }
    SUBCASE("empty non-polarized segment rejected") {
        CHECK_THROWS_WITH_AS(parse_contrastive("POLARIZED: A\nNON_POLARIZED:   "),
                             doctest::Contains("empty NON_POLARIZED"), ValidationError);
    }
}

TEST_CASE("generate_contrastive builds the labeled pair") {
    RunConfig cfg;
    cfg.endpoints.chat_model = "test-model";
    const auto lib = PromptLibrary::builtin();
    FakeChatClient client;
    const auto [pol, non] = generate_contrastive(LanguageCode("khm"), "refugees", client, lib,
                                                 cfg, "c1", "c2");
    CHECK(pol.label == 1);
    CHECK(non.label == 0);
    CHECK(pol.topic == non.topic);
    CHECK(pol.strategy == Strategy::contrastive);
    CHECK(non.strategy == Strategy::contrastive);
    CHECK(pol.id == "c1");
    CHECK(non.id == "c2");
}

TEST_CASE("backtranslate issues one call per hop and reports hop failures") {
    EchoTranslationClient client;
    const LanguageCode khm("khm");

    SUBCASE("identity pivot returns the input") {
        const auto out = backtranslate("original text", khm, {"eng"}, client);
        CHECK(out == "original text");
        CHECK(client.calls == 2);  // khm->eng, eng->khm
    }
    SUBCASE("two pivots issue three calls") {
        client.calls = 0;
        client.hops.clear();
        backtranslate("original text", khm, {"eng", "deu"}, client);
        REQUIRE(client.calls == 3);
        CHECK(client.hops[0] == std::pair<std::string, std::string>{"khm", "eng"});
        CHECK(client.hops[1] == std::pair<std::string, std::string>{"eng", "deu"});
        CHECK(client.hops[2] == std::pair<std::string, std::string>{"deu", "khm"});
    }
    SUBCASE("failure carries the hop index") {
        client.calls = 0;
        client.fail_on_call = 2;
        CHECK_THROWS_WITH_AS(backtranslate("text", khm, {"eng", "deu"}, client),
                             doctest::Contains("hop 2"), ServiceError);
    }
    SUBCASE("empty pivot chain rejected") {
        CHECK_THROWS_AS(backtranslate("text", khm, {}, client), ConfigError);
    }
}

TEST_CASE("batch generation is byte-reproducible and honors the plan") {
    RunConfig cfg;
    cfg.endpoints.chat_model = "test-model";
    cfg.concurrency_limit = 4;
    const auto lib = PromptLibrary::builtin();
    const auto topics = TopicCatalog::builtin();
    const auto real = small_real_set(8);
    FakeChatClient client;

    const auto plan = plan_batch(LanguageCode("khm"), 40, cfg);
    CHECK(plan.counts.direct_n == 20);
    CHECK(plan.counts.paraphrase_n == 12);
    CHECK(plan.counts.contrastive_n == 8);

    const auto r1 = generate_batch(plan, &real, client, topics, lib, cfg);
    CHECK(r1.samples.size() == 40);
    CHECK(r1.request_count == 20 + 12 + 4);

    // samples all satisfy core invariants; ids unique; strategies counted
    std::set<std::string> ids;
    long direct = 0, para = 0, contrast = 0;
    for (const auto& s : r1.samples.samples) {
        CHECK(ids.insert(s.id).second);
        REQUIRE(s.strategy.has_value());
        switch (*s.strategy) {
            case Strategy::direct: ++direct; break;
            case Strategy::paraphrase: ++para; break;
            case Strategy::contrastive: ++contrast; break;
            default: break;
        }
    }
    CHECK(direct == 20);
    CHECK(para == 12);
    CHECK(contrast == 8);

    SUBCASE("two runs serialize identically") {
        TempDir dir;
        const auto r2 = generate_batch(plan, &real, client, topics, lib, cfg);
        write_dataset(r1.samples, dir.file("a.jsonl"));
        write_dataset(r2.samples, dir.file("b.jsonl"));
        CHECK(testsupport::read_file(dir.file("a.jsonl")) ==
              testsupport::read_file(dir.file("b.jsonl")));
        CHECK(testsupport::read_file(dir.file("a.jsonl")).size() > 0);
    }

    SUBCASE("single worker produces the same bytes as four") {
        RunConfig serial = cfg;
        serial.concurrency_limit = 1;
        const auto r_serial = generate_batch(plan, &real, client, topics, lib, serial);
        TempDir dir;
        write_dataset(r1.samples, dir.file("par.jsonl"));
        write_dataset(r_serial.samples, dir.file("ser.jsonl"));
        CHECK(testsupport::read_file(dir.file("par.jsonl")) ==
              testsupport::read_file(dir.file("ser.jsonl")));
    }

    SUBCASE("paraphrase without a real set is an error") {
        CHECK_THROWS_AS(generate_batch(plan, nullptr, client, topics, lib, cfg), ConfigError);
    }
}

TEST_CASE("plan_requests carries the per-strategy parameters") {
    RunConfig cfg;
    cfg.endpoints.chat_model = "test-model";
    const auto lib = PromptLibrary::builtin();
    const auto topics = TopicCatalog::builtin();
    const auto real = small_real_set(5);
    const auto plan = plan_batch(LanguageCode("khm"), 20, cfg);

    const auto requests = plan_requests(plan, &real, topics, lib, cfg);
    REQUIRE(requests.size() == 10 + 6 + 2);
    for (const auto& r : requests) {
        switch (r.strategy) {
            case Strategy::direct:
                CHECK(r.temperature == 0.9);
                CHECK(r.max_tokens == 250);
                break;
            case Strategy::paraphrase:
                CHECK(r.temperature == 0.7);
                CHECK(r.max_tokens == 250);
                break;
            case Strategy::contrastive:
                CHECK(r.temperature == 0.8);
                CHECK(r.max_tokens == 500);
                break;
            default:
                FAIL("unexpected strategy in plan");
        }
        CHECK(r.prompt.find('{') == std::string::npos);  // fully substituted
    }
}
