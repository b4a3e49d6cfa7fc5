// polar: decision-layer and data-layer toolkit for multilingual
// polarization detection. Subcommands cover splitting, synthetic-data
// generation and filtering, threshold/ensemble tuning, evaluation,
// calibration diagnostics and reporting; model inference stays outside,
// abstracted to prediction files.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polar/calibration.hpp"
#include "polar/clients.hpp"
#include "polar/config.hpp"
#include "polar/embedding.hpp"
#include "polar/ensemble.hpp"
#include "polar/filter.hpp"
#include "polar/io.hpp"
#include "polar/metrics.hpp"
#include "polar/reporting.hpp"
#include "polar/split_mix.hpp"
#include "polar/synth.hpp"
#include "polar/threshold.hpp"
#include "polar/types.hpp"

namespace {

using polar::RunConfig;

struct GlobalOpts {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<int> jobs;
    bool dry_run = false;
};

RunConfig load_config(const GlobalOpts& g) {
    RunConfig cfg = g.config_path.empty() ? RunConfig{} : RunConfig::load(g.config_path);
    if (g.seed) cfg.seed = *g.seed;
    if (g.jobs) cfg.concurrency_limit = *g.jobs;
    cfg.validate();
    return cfg;
}

void warn_orphans(const std::vector<std::string>& orphans, const std::string& what) {
    if (orphans.empty()) return;
    std::cerr << "warning: " << what << " has " << orphans.size()
              << " prediction(s) without dataset rows:";
    const size_t shown = std::min<size_t>(orphans.size(), 8);
    for (size_t i = 0; i < shown; ++i) std::cerr << " '" << orphans[i] << "'";
    if (orphans.size() > shown) {
        std::cerr << " and " << orphans.size() - shown << " more";
    }
    std::cerr << "\n";
}

nlohmann::json read_json_file(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) {
        throw polar::ConfigError("cannot open " + what + ": " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw polar::ValidationError(what + " parse error in " + path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw polar::ConfigError("cannot open for writing: " + path);
    }
    out << content;
}

polar::RenderFormat parse_format(const std::string& s) {
    if (s == "csv") return polar::RenderFormat::csv;
    if (s == "markdown" || s == "md") return polar::RenderFormat::markdown;
    throw polar::ConfigError("unknown format '" + s + "' (expected csv or markdown)");
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
    }
}

/// Decision files are merged per language so a per-language pipeline can
/// accumulate one file across invocations.
void merge_decision_file(const polar::TunedDecision& decision, const std::string& path,
                         const polar::LanguageRegistry& registry) {
    std::vector<polar::TunedDecision> decisions;
    if (std::filesystem::exists(path)) {
        decisions = polar::read_decisions(path, registry);
    }
    std::erase_if(decisions, [&](const polar::TunedDecision& d) {
        return d.lang && decision.lang && d.lang->str() == decision.lang->str();
    });
    decisions.push_back(decision);
    polar::write_decisions(decisions, path);
}

// ---------------------------------------------------------------- split

struct SplitArgs {
    std::string input, train, val;
    double ratio = 0.8;
};

int run_split(const GlobalOpts& g, const SplitArgs& a) {
    const RunConfig cfg = load_config(g);
    const auto dataset = polar::read_dataset(a.input, cfg.registry());
    const auto result = polar::stratified_split(dataset, a.ratio, cfg.seed);
    polar::write_dataset(result.train, a.train);
    polar::write_dataset(result.validation, a.val);
    std::cout << "split " << dataset.size() << " samples into " << result.train.size()
              << " train / " << result.validation.size() << " validation\n";
    return 0;
}

// ------------------------------------------------------------------ mix

struct MixArgs {
    std::string train, pool, out, plan;
    std::optional<double> ratio;
};

int run_mix(const GlobalOpts& g, const MixArgs& a) {
    const RunConfig cfg = load_config(g);
    const auto train = polar::read_dataset(a.train, cfg.registry());
    const auto pool = polar::read_dataset(a.pool, cfg.registry());
    const double r = a.ratio.value_or(cfg.synth_ratio);
    const auto result = polar::mix_synthetic(train, pool, r, cfg.seed);
    polar::write_dataset(result.mixed, a.out);
    // the plan always lands next to the output unless redirected
    const std::string plan_path = a.plan.empty() ? a.out + ".plan.json" : a.plan;
    write_text_file(plan_path, result.plan.to_json().dump(2) + "\n");
    std::cout << "mixed " << result.plan.n_synth_used << " synthetic into "
              << result.plan.n_real << " real (target " << result.plan.n_synth_target
              << (result.plan.capped ? ", capped" : "") << ")\n";
    return 0;
}

// ------------------------------------------------------------- generate

struct GenerateArgs {
    std::string lang;
    std::string mode = "generate";  // generate | backtranslate | crosslingual
    long total = 1000;
    std::string out, real, topics_path, prompts_dir;
    std::string label_allocation = "balanced";
    std::string pivots = "eng";
    std::string target_lang;
};

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int run_generate(const GlobalOpts& g, const GenerateArgs& a) {
    const RunConfig cfg = load_config(g);
    const polar::LanguageCode lang(a.lang, cfg.registry());

    if (a.mode == "backtranslate" || a.mode == "crosslingual") {
        if (a.real.empty()) {
            throw polar::ConfigError(a.mode + " mode needs --real with the source dataset");
        }
        if (cfg.endpoints.translate_base_url.empty()) {
            throw polar::ConfigError("endpoints.translate_base_url must be configured");
        }
        const auto source = polar::read_dataset(a.real, cfg.registry());
        polar::RetryPolicy retry{.max_retries = cfg.endpoints.max_retries,
                                 .base_s = cfg.endpoints.backoff_base_s,
                                 .factor = cfg.endpoints.backoff_factor};
        polar::HttpTranslationClient client(cfg.endpoints.translate_base_url, retry,
                                            cfg.endpoints.timeout_s);
        polar::Dataset out;
        long seq = 1;
        if (a.mode == "backtranslate") {
            const auto pivots = split_csv(a.pivots);
            out.lang = lang;
            for (const auto& s : source.samples) {
                std::string text = polar::backtranslate(s.text, lang, pivots, client);
                polar::Sample child{.id = "syn-" + lang.str() + "-backtranslation-" +
                                          std::to_string(seq++),
                                    .lang = lang,
                                    .text = std::move(text),
                                    .label = s.label,
                                    .source = polar::Source::synthetic,
                                    .strategy = polar::Strategy::backtranslation,
                                    .topic = s.topic,
                                    .parent_id = s.id};
                child.extra["pivots"] = pivots;
                out.samples.push_back(std::move(child));
            }
        } else {
            if (a.target_lang.empty()) {
                throw polar::ConfigError("crosslingual mode needs --target-lang");
            }
            const polar::LanguageCode target(a.target_lang, cfg.registry());
            out.lang = target;
            for (const auto& s : source.samples) {
                std::string text = client.translate(s.text, s.lang.str(), target.str());
                polar::Sample child{.id = "syn-" + target.str() + "-crosslingual-" +
                                          std::to_string(seq++),
                                    .lang = target,
                                    .text = std::move(text),
                                    .label = s.label,
                                    .source = polar::Source::synthetic,
                                    .strategy = polar::Strategy::crosslingual,
                                    .topic = s.topic,
                                    .parent_id = s.id};
                child.extra["source_lang"] = s.lang.str();
                out.samples.push_back(std::move(child));
            }
        }
        polar::write_dataset(out, a.out);
        std::cout << "translated " << out.size() << " samples\n";
        return 0;
    }

    const auto topics =
        a.topics_path.empty() ? polar::TopicCatalog::builtin() : polar::TopicCatalog::load(a.topics_path);
    const auto prompts =
        a.prompts_dir.empty() ? polar::PromptLibrary::builtin() : polar::PromptLibrary::load(a.prompts_dir);

    std::optional<polar::Dataset> real;
    if (!a.real.empty()) {
        real = polar::read_dataset(a.real, cfg.registry());
    }
    const auto alloc = a.label_allocation == "counter_imbalance"
                           ? polar::DirectLabelAllocation::counter_imbalance
                           : polar::DirectLabelAllocation::balanced;
    const auto plan =
        polar::plan_batch(lang, a.total, cfg, alloc, real ? &*real : nullptr);

    if (g.dry_run) {
        const auto requests =
            polar::plan_requests(plan, real ? &*real : nullptr, topics, prompts, cfg);
        nlohmann::json j{{"lang", lang.str()},
                         {"total_n", plan.total_n},
                         {"counts",
                          {{"direct", plan.counts.direct_n},
                           {"paraphrase", plan.counts.paraphrase_n},
                           {"contrastive", plan.counts.contrastive_n}}},
                         {"direct_polarized", plan.direct_polarized},
                         {"direct_non_polarized", plan.direct_non_polarized}};
        nlohmann::json reqs = nlohmann::json::array();
        for (const auto& r : requests) {
            reqs.push_back({{"strategy", polar::to_string(r.strategy)},
                            {"temperature", r.temperature},
                            {"max_tokens", r.max_tokens},
                            {"prompt", r.prompt}});
        }
        j["requests"] = std::move(reqs);
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    if (cfg.endpoints.chat_base_url.empty() || cfg.endpoints.chat_model.empty()) {
        throw polar::ConfigError(
            "endpoints.chat_base_url and endpoints.chat_model must be configured "
            "(or use --dry-run)");
    }
    polar::RetryPolicy retry{.max_retries = cfg.endpoints.max_retries,
                             .base_s = cfg.endpoints.backoff_base_s,
                             .factor = cfg.endpoints.backoff_factor};
    polar::HttpChatClient client(cfg.endpoints.chat_base_url, retry, cfg.endpoints.timeout_s);
    const auto result =
        polar::generate_batch(plan, real ? &*real : nullptr, client, topics, prompts, cfg);
    polar::write_dataset(result.samples, a.out);
    std::cout << "generated " << result.samples.size() << " samples ("
              << result.request_count << " requests)\n";
    return 0;
}

// ---------------------------------------------------------------- filter

struct FilterArgs {
    std::string synthetic, reference, out, report;
    std::string provider = "test";
};

int run_filter(const GlobalOpts& g, const FilterArgs& a) {
    const RunConfig cfg = load_config(g);
    const auto synthetic = polar::read_dataset(a.synthetic, cfg.registry());
    const auto reference = polar::read_dataset(a.reference, cfg.registry());
    auto provider = polar::make_embedding_provider(a.provider);
    const auto result = polar::run_pipeline(synthetic, reference, cfg, *provider);
    polar::write_dataset(result.kept, a.out);
    if (!a.report.empty()) {
        write_text_file(a.report, result.report.to_json().dump(2) + "\n");
    }
    std::cout << "kept " << result.kept.size() << " of " << synthetic.size() << " samples\n";
    return 0;
}

// ------------------------------------------------------------------ tune

struct TuneArgs {
    std::string lang, dev_data, dev_preds, out;
};

int run_tune(const GlobalOpts& g, const TuneArgs& a) {
    const RunConfig cfg = load_config(g);
    const polar::LanguageCode lang(a.lang, cfg.registry());
    const auto data = polar::read_dataset(a.dev_data, cfg.registry());
    const auto preds = polar::read_predictions(a.dev_preds, cfg.registry());
    if (data.lang && *data.lang != lang) {
        throw polar::ValidationError("--lang is '" + lang.str() + "' but the dataset is '" +
                                     data.lang->str() + "'");
    }
    if (preds.lang != lang) {
        throw polar::ValidationError("--lang is '" + lang.str() + "' but predictions are '" +
                                     preds.lang.str() + "'");
    }
    const auto aligned = polar::align(data, preds);
    warn_orphans(aligned.orphan_ids, a.dev_preds);
    const auto choice =
        polar::tune_threshold(aligned.labels, aligned.probs, polar::ThresholdGrid{cfg.threshold_grid});

    polar::TunedDecision decision;
    decision.lang = lang;
    decision.strategy = {polar::StrategyKind::model_a_tuned, std::nullopt};
    decision.threshold = choice.threshold;
    decision.dev_f1 = choice.dev_f1;
    merge_decision_file(decision, a.out, cfg.registry());
    std::cout << "tuned " << lang.str() << ": threshold " << choice.threshold << " dev_f1 "
              << choice.dev_f1 << "\n";
    return 0;
}

// ---------------------------------------------------------------- select

struct SelectArgs {
    std::string lang, dev_data, preds_a, preds_b, out;
};

int run_select(const GlobalOpts& g, const SelectArgs& a) {
    const RunConfig cfg = load_config(g);
    const polar::LanguageCode lang(a.lang, cfg.registry());
    const auto data = polar::read_dataset(a.dev_data, cfg.registry());
    const auto preds_a = polar::read_predictions(a.preds_a, cfg.registry());
    const auto preds_b = polar::read_predictions(a.preds_b, cfg.registry());
    if (preds_a.lang != lang || preds_b.lang != lang) {
        throw polar::ValidationError("prediction files must match --lang '" + lang.str() + "'");
    }
    const auto aligned_a = polar::align(data, preds_a);
    const auto aligned_b = polar::align(data, preds_b);
    warn_orphans(aligned_a.orphan_ids, a.preds_a);
    warn_orphans(aligned_b.orphan_ids, a.preds_b);

    auto decision = polar::select_strategy(aligned_a.labels, aligned_a.probs, aligned_b.probs, cfg);
    decision.lang = lang;
    merge_decision_file(decision, a.out, cfg.registry());
    std::cout << "selected " << lang.str() << ": " << polar::to_string(decision.strategy.kind);
    if (decision.strategy.weight) std::cout << " w=" << *decision.strategy.weight;
    std::cout << " threshold " << decision.threshold << " dev_f1 " << decision.dev_f1 << "\n";
    return 0;
}

// -------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string data, preds_a, preds_b, decisions, out;
    std::string name = "run";
};

int run_evaluate(const GlobalOpts& g, const EvaluateArgs& a) {
    const RunConfig cfg = load_config(g);
    const auto data = polar::read_dataset(a.data, cfg.registry());
    if (!data.lang) {
        throw polar::ValidationError("evaluate: dataset is empty");
    }
    const auto decisions = polar::read_decisions(a.decisions, cfg.registry());
    const polar::TunedDecision* decision = nullptr;
    for (const auto& d : decisions) {
        if (d.lang && *d.lang == *data.lang) {
            decision = &d;
            break;
        }
    }
    if (decision == nullptr) {
        throw polar::ValidationError("no decision recorded for language '" + data.lang->str() +
                                     "' in " + a.decisions);
    }

    const auto preds_a = polar::read_predictions(a.preds_a, cfg.registry());
    const auto aligned_a = polar::align(data, preds_a);
    warn_orphans(aligned_a.orphan_ids, a.preds_a);

    std::vector<double> series;
    if (decision->strategy.kind == polar::StrategyKind::model_a_tuned) {
        series = aligned_a.probs;
    } else {
        if (a.preds_b.empty()) {
            throw polar::ValidationError("decision for '" + data.lang->str() + "' is " +
                                         polar::to_string(decision->strategy.kind) +
                                         " and needs --preds-b");
        }
        const auto preds_b = polar::read_predictions(a.preds_b, cfg.registry());
        const auto aligned_b = polar::align(data, preds_b);
        warn_orphans(aligned_b.orphan_ids, a.preds_b);
        series = polar::apply_strategy(decision->strategy, aligned_a.probs, aligned_b.probs);
    }

    const auto pred = polar::apply_threshold(series, decision->threshold);
    const auto result = polar::macro_f1(aligned_a.labels, pred);

    std::map<std::string, double> rows;
    std::string name = a.name;
    if (std::filesystem::exists(a.out)) {
        const auto existing = polar::ResultTable::load(a.out);
        rows = existing.rows;
        name = a.name == "run" ? existing.name : a.name;
    }
    rows[data.lang->str()] = result.macro_f1;
    polar::aggregate(name, rows).save(a.out);
    std::cout << "evaluated " << data.lang->str() << ": macro_f1 " << result.macro_f1
              << " (threshold " << decision->threshold << ")\n";
    return 0;
}

// ------------------------------------------------------------- calibrate

struct CalibrateArgs {
    std::string preds, data, out;
};

int run_calibrate(const GlobalOpts& g, const CalibrateArgs& a) {
    const RunConfig cfg = load_config(g);
    const auto preds = polar::read_predictions(a.preds, cfg.registry());
    std::vector<double> probs;
    probs.reserve(preds.records.size());
    for (const auto& r : preds.records) probs.push_back(r.prob);

    polar::CalibrationReport report;
    if (!a.data.empty()) {
        const auto data = polar::read_dataset(a.data, cfg.registry());
        const auto aligned = polar::align(data, preds);
        warn_orphans(aligned.orphan_ids, a.preds);
        report = polar::calibration_report(aligned.probs, aligned.labels);
    } else {
        report = polar::calibration_report(probs);
    }
    report.lang = preds.lang;
    write_text_file(a.out, polar::calibration_to_json(report).dump(2) + "\n");
    std::cout << "calibration " << preds.lang.str() << ": mean_prob " << report.mean_prob << " ("
              << polar::to_string(report.verdict) << ")\n";
    return 0;
}

// --------------------------------------------------------------- combine

struct CombineArgs {
    std::vector<std::string> tables;
    std::string out, name, provenance;
};

int run_combine(const GlobalOpts&, const CombineArgs& a) {
    std::vector<polar::ResultTable> tables;
    for (const auto& path : a.tables) {
        tables.push_back(polar::ResultTable::load(path));
    }
    auto result = polar::combine_best(tables);
    if (!a.name.empty()) {
        result.best.name = a.name;
    }
    result.best.save(a.out);
    if (!a.provenance.empty()) {
        write_text_file(a.provenance, nlohmann::json(result.provenance).dump(2) + "\n");
    }
    std::cout << "combined " << tables.size() << " tables: mean " << result.best.mean << "\n";
    return 0;
}

// ---------------------------------------------------------------- report

struct ReportTableArgs {
    std::string in, out;
    std::string format = "markdown";
};

struct ReportDeltaArgs {
    std::string a, b, out;
    std::string format = "markdown";
};

struct ReportHistogramArgs {
    std::string decisions, out;
    std::string format = "markdown";
};

struct ReportLeaderboardArgs {
    std::string ours, best, ranks, out, summary;
    std::optional<double> best_avg;
    std::string format = "markdown";
};

int run_report_table(const ReportTableArgs& a) {
    const auto table = polar::ResultTable::load(a.in);
    emit(a.out, polar::render(table, parse_format(a.format)));
    return 0;
}

int run_report_delta(const ReportDeltaArgs& a) {
    const auto ta = polar::ResultTable::load(a.a);
    const auto tb = polar::ResultTable::load(a.b);
    const auto d = polar::delta_table(ta, tb);
    emit(a.out, polar::render_delta(ta, tb, d, parse_format(a.format)));
    return 0;
}

int run_report_histogram(const GlobalOpts& g, const ReportHistogramArgs& a) {
    const RunConfig cfg = load_config(g);
    const auto decisions = polar::read_decisions(a.decisions, cfg.registry());
    const auto h = polar::strategy_histogram(decisions);
    emit(a.out, polar::render_histogram(h, parse_format(a.format)));
    return 0;
}

int run_report_leaderboard(const ReportLeaderboardArgs& a) {
    const auto ours = polar::ResultTable::load(a.ours);
    const auto best = polar::ResultTable::load(a.best);
    const auto ranks_json = read_json_file(a.ranks, "ranks file");
    std::map<std::string, int> ranks;
    for (auto it = ranks_json.begin(); it != ranks_json.end(); ++it) {
        ranks[it.key()] = it.value().get<int>();
    }
    const auto report = polar::leaderboard_compare(ours, best, ranks, a.best_avg);
    emit(a.out, polar::render_leaderboard(report, parse_format(a.format)));
    if (!a.summary.empty()) {
        nlohmann::json j{{"first_place", report.first_place},
                         {"top3", report.top3},
                         {"top10", report.top10},
                         {"ours_mean", report.ours_mean}};
        if (report.mean_delta) j["mean_delta"] = *report.mean_delta;
        write_text_file(a.summary, j.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polarization-detection decision/data toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "run configuration JSON file");
    uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "override config seed");
    int jobs_value = 0;
    auto* jobs_opt = app.add_option("--jobs", jobs_value, "parallel worker limit");
    app.add_flag("--dry-run", g.dry_run, "plan only; no network calls (generate)");

    SplitArgs split_args;
    auto* split = app.add_subcommand("split", "stratified train/validation split of real data");
    split->add_option("--input", split_args.input, "input dataset (JSONL)")->required();
    split->add_option("--train", split_args.train, "output training dataset")->required();
    split->add_option("--val", split_args.val, "output validation dataset")->required();
    split->add_option("--ratio", split_args.ratio, "train fraction (default 0.8)");

    MixArgs mix_args;
    auto* mix = app.add_subcommand("mix", "mix synthetic samples into a training set");
    mix->add_option("--train", mix_args.train, "real training dataset")->required();
    mix->add_option("--pool", mix_args.pool, "synthetic pool dataset")->required();
    mix->add_option("--out", mix_args.out, "output mixed dataset")->required();
    double mix_ratio = 0.0;
    auto* mix_ratio_opt =
        mix->add_option("--ratio", mix_ratio, "synthetic fraction of the final set");
    mix->add_option("--plan", mix_args.plan, "mix plan JSON path (default <out>.plan.json)");

    GenerateArgs gen_args;
    auto* generate = app.add_subcommand("generate", "synthetic data generation via chat endpoint");
    generate->add_option("--lang", gen_args.lang, "target language code")->required();
    generate->add_option("--mode", gen_args.mode,
                         "generate | backtranslate | crosslingual (default generate)");
    generate->add_option("--total", gen_args.total, "batch size (default 1000)");
    generate->add_option("--out", gen_args.out, "output synthetic dataset")->required();
    generate->add_option("--real", gen_args.real,
                         "real training set (paraphrase parents / translation source)");
    generate->add_option("--topics", gen_args.topics_path, "topic catalog JSON (default builtin)");
    generate->add_option("--prompts", gen_args.prompts_dir,
                         "prompt template directory (default builtin)");
    generate->add_option("--label-allocation", gen_args.label_allocation,
                         "balanced | counter_imbalance");
    generate->add_option("--pivots", gen_args.pivots,
                         "pivot chain for backtranslate mode (default eng)");
    generate->add_option("--target-lang", gen_args.target_lang,
                         "target language for crosslingual mode");

    FilterArgs filter_args;
    auto* filter = app.add_subcommand("filter", "run the quality filter pipeline");
    filter->add_option("--synthetic", filter_args.synthetic, "synthetic dataset")->required();
    filter->add_option("--reference", filter_args.reference, "real training reference")->required();
    filter->add_option("--out", filter_args.out, "output filtered dataset")->required();
    filter->add_option("--report", filter_args.report, "write the filter report JSON here");
    filter->add_option("--provider", filter_args.provider,
                       "embedding provider: test | test:<dim> | file:<path> | http(s)://<url>");

    TuneArgs tune_args;
    auto* tune = app.add_subcommand("tune", "tune the decision threshold for one language");
    tune->add_option("--lang", tune_args.lang, "language code")->required();
    tune->add_option("--dev-data", tune_args.dev_data, "development dataset")->required();
    tune->add_option("--dev-preds", tune_args.dev_preds, "development predictions")->required();
    tune->add_option("--out", tune_args.out, "decision file (merged per language)")->required();

    SelectArgs select_args;
    auto* select = app.add_subcommand("select", "select the best ensemble strategy per language");
    select->add_option("--lang", select_args.lang, "language code")->required();
    select->add_option("--dev-data", select_args.dev_data, "development dataset")->required();
    select->add_option("--preds-a", select_args.preds_a, "model A dev predictions")->required();
    select->add_option("--preds-b", select_args.preds_b, "model B dev predictions")->required();
    select->add_option("--out", select_args.out, "decision file (merged per language)")->required();

    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "apply a recorded decision and score a dataset");
    evaluate->add_option("--data", eval_args.data, "labeled dataset")->required();
    evaluate->add_option("--preds-a", eval_args.preds_a, "model A predictions")->required();
    evaluate->add_option("--preds-b", eval_args.preds_b, "model B predictions (for ensembles)");
    evaluate->add_option("--decisions", eval_args.decisions, "decision file")->required();
    evaluate->add_option("--out", eval_args.out, "result table JSON (merged per language)")
        ->required();
    evaluate->add_option("--name", eval_args.name, "result table name");

    CalibrateArgs cal_args;
    auto* calibrate = app.add_subcommand("calibrate", "probability calibration diagnostics");
    calibrate->add_option("--preds", cal_args.preds, "prediction file")->required();
    calibrate->add_option("--data", cal_args.data, "labeled dataset (enables empirical rates)");
    calibrate->add_option("--out", cal_args.out, "calibration report JSON")->required();

    CombineArgs combine_args;
    auto* combine = app.add_subcommand("combine", "best per-language result across tables");
    combine->add_option("tables", combine_args.tables, "result table JSON files (two or more)")
        ->required()
        ->expected(-2);
    combine->add_option("--out", combine_args.out, "output result table")->required();
    combine->add_option("--name", combine_args.name, "name for the combined table");
    combine->add_option("--provenance", combine_args.provenance,
                        "write per-language winning table names here");

    auto* report = app.add_subcommand("report", "render tables, deltas, histograms, leaderboards");
    report->require_subcommand(1);

    ReportTableArgs rt_args;
    auto* rt = report->add_subcommand("table", "render one result table");
    rt->add_option("--in", rt_args.in, "result table JSON")->required();
    rt->add_option("--format", rt_args.format, "csv | markdown");
    rt->add_option("--out", rt_args.out, "output file (default stdout)");

    ReportDeltaArgs rd_args;
    auto* rd = report->add_subcommand("delta", "per-language deltas between two tables");
    rd->add_option("--a", rd_args.a, "baseline table JSON")->required();
    rd->add_option("--b", rd_args.b, "comparison table JSON")->required();
    rd->add_option("--format", rd_args.format, "csv | markdown");
    rd->add_option("--out", rd_args.out, "output file (default stdout)");

    ReportHistogramArgs rh_args;
    auto* rh = report->add_subcommand("histogram", "winning-strategy counts from a decision file");
    rh->add_option("--decisions", rh_args.decisions, "decision file")->required();
    rh->add_option("--format", rh_args.format, "csv | markdown");
    rh->add_option("--out", rh_args.out, "output file (default stdout)");

    ReportLeaderboardArgs rl_args;
    auto* rl = report->add_subcommand("leaderboard", "compare our scores to per-language bests");
    rl->add_option("--ours", rl_args.ours, "our result table JSON")->required();
    rl->add_option("--best", rl_args.best, "per-language best table JSON")->required();
    rl->add_option("--ranks", rl_args.ranks, "JSON object mapping lang to rank")->required();
    double best_avg = 0.0;
    auto* best_avg_opt =
        rl->add_option("--best-avg", best_avg, "published overall mean of the top team");
    rl->add_option("--format", rl_args.format, "csv | markdown");
    rl->add_option("--out", rl_args.out, "output file (default stdout)");
    rl->add_option("--summary", rl_args.summary, "write summary counts JSON here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "ERROR[1] " << e.what() << "\n";
        std::cerr << app.help() << "\n";
        return 1;
    }

    if (seed_opt->count() > 0) g.seed = seed_value;
    if (jobs_opt->count() > 0) g.jobs = jobs_value;
    if (mix_ratio_opt->count() > 0) mix_args.ratio = mix_ratio;
    if (best_avg_opt->count() > 0) rl_args.best_avg = best_avg;

    try {
        if (split->parsed()) return run_split(g, split_args);
        if (mix->parsed()) return run_mix(g, mix_args);
        if (generate->parsed()) return run_generate(g, gen_args);
        if (filter->parsed()) return run_filter(g, filter_args);
        if (tune->parsed()) return run_tune(g, tune_args);
        if (select->parsed()) return run_select(g, select_args);
        if (evaluate->parsed()) return run_evaluate(g, eval_args);
        if (calibrate->parsed()) return run_calibrate(g, cal_args);
        if (combine->parsed()) return run_combine(g, combine_args);
        if (report->parsed()) {
            if (rt->parsed()) return run_report_table(rt_args);
            if (rd->parsed()) return run_report_delta(rd_args);
            if (rh->parsed()) return run_report_histogram(g, rh_args);
            if (rl->parsed()) return run_report_leaderboard(rl_args);
        }
        std::cerr << "ERROR[1] no subcommand given\n" << app.help() << "\n";
        return 1;
    } catch (const polar::Error& e) {
        const int code = static_cast<int>(e.kind());
        std::cerr << "ERROR[" << code << "] " << e.what() << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "ERROR[1] " << e.what() << "\n";
        return 1;
    }
}
