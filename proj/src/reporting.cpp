#include "polar/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace polar {

namespace {

double mean_of(const std::map<std::string, double>& rows) {
    double total = 0.0;
    for (const auto& [_, v] : rows) total += v;
    return total / static_cast<double>(rows.size());
}

void require_same_languages(const std::map<std::string, double>& a,
                            const std::map<std::string, double>& b, const std::string& what) {
    if (a.size() == b.size() &&
        std::equal(a.begin(), a.end(), b.begin(),
                   [](const auto& x, const auto& y) { return x.first == y.first; })) {
        return;
    }
    std::ostringstream msg;
    msg << what << ": language sets differ;";
    for (const auto& [k, _] : a) {
        if (!b.count(k)) msg << " only-left '" << k << "'";
    }
    for (const auto& [k, _] : b) {
        if (!a.count(k)) msg << " only-right '" << k << "'";
    }
    throw ValidationError(msg.str());
}

}  // namespace

nlohmann::json ResultTable::to_json() const {
    return nlohmann::json{{"name", name}, {"rows", rows}, {"mean", mean}};
}

ResultTable ResultTable::from_json(const nlohmann::json& j) {
    ResultTable t;
    t.name = j.at("name").get<std::string>();
    t.rows = j.at("rows").get<std::map<std::string, double>>();
    if (t.rows.empty()) {
        throw ValidationError("result table '" + t.name + "' has no rows");
    }
    t.mean = mean_of(t.rows);
    if (j.contains("mean") && std::abs(j.at("mean").get<double>() - t.mean) > 1e-6) {
        throw ValidationError("result table '" + t.name + "' mean does not match its rows");
    }
    return t;
}

ResultTable ResultTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open result table: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("result table parse error in " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

void ResultTable::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open for writing: " + path.string());
    }
    out << to_json().dump(2) << '\n';
}

ResultTable aggregate(const std::string& name, const std::map<std::string, double>& rows) {
    if (rows.empty()) {
        throw ValidationError("aggregate: no rows");
    }
    for (const auto& [lang, v] : rows) {
        if (v < 0.0 || v > 1.0) {
            throw ValidationError("aggregate: F1 for '" + lang + "' outside [0,1]");
        }
    }
    ResultTable t;
    t.name = name;
    t.rows = rows;
    t.mean = mean_of(rows);
    return t;
}

DeltaTable delta_table(const ResultTable& a, const ResultTable& b,
                       const std::map<std::string, int>& zero_signs) {
    require_same_languages(a.rows, b.rows, "delta_table");
    DeltaTable d;
    double total = 0.0;
    for (const auto& [lang, va] : a.rows) {
        const double delta = b.rows.at(lang) - va;
        d.deltas[lang] = delta;
        total += delta;
        if (delta > 0.0) {
            ++d.improved;
        } else if (delta < 0.0) {
            ++d.regressed;
        } else {
            auto it = zero_signs.find(lang);
            if (it != zero_signs.end() && it->second > 0) ++d.improved;
            else if (it != zero_signs.end() && it->second < 0) ++d.regressed;
            else ++d.unchanged;
        }
    }
    d.mean_delta = total / static_cast<double>(d.deltas.size());
    return d;
}

CombineResult combine_best(const std::vector<ResultTable>& tables) {
    if (tables.size() < 2) {
        throw ValidationError("combine_best: need at least two tables");
    }
    for (size_t i = 1; i < tables.size(); ++i) {
        require_same_languages(tables[0].rows, tables[i].rows, "combine_best");
    }

    CombineResult result;
    bool same_name = true;
    for (const auto& t : tables) {
        same_name = same_name && t.name == tables[0].name;
    }
    if (same_name) {
        result.best.name = tables[0].name;
    } else {
        std::string name = "best_of(";
        for (size_t i = 0; i < tables.size(); ++i) {
            if (i) name += ",";
            name += tables[i].name;
        }
        name += ")";
        result.best.name = name;
    }

    for (const auto& [lang, v0] : tables[0].rows) {
        double best_v = v0;
        std::string winner = tables[0].name;
        for (size_t i = 1; i < tables.size(); ++i) {
            const double v = tables[i].rows.at(lang);
            if (v > best_v) {  // ties keep the earliest table
                best_v = v;
                winner = tables[i].name;
            }
        }
        result.best.rows[lang] = best_v;
        result.provenance[lang] = winner;
    }
    result.best.mean = mean_of(result.best.rows);
    return result;
}

StrategyHistogram strategy_histogram(const std::vector<TunedDecision>& decisions) {
    StrategyHistogram h;
    h.by_kind = {{"model_a_tuned", 0}, {"model_b_tuned", 0}, {"average", 0}, {"weighted", 0}};
    for (const auto& d : decisions) {
        ++h.by_kind[to_string(d.strategy.kind)];
        ++h.total;
        if (d.strategy.kind == StrategyKind::average ||
            d.strategy.kind == StrategyKind::weighted) {
            ++h.ensemble_total;
        }
    }
    return h;
}

LeaderboardReport leaderboard_compare(const ResultTable& ours, const ResultTable& best,
                                      const std::map<std::string, int>& ranks,
                                      std::optional<double> overall_best_mean) {
    require_same_languages(ours.rows, best.rows, "leaderboard_compare");
    LeaderboardReport report;
    for (const auto& [lang, our_v] : ours.rows) {
        auto rank_it = ranks.find(lang);
        if (rank_it == ranks.end()) {
            throw ValidationError("leaderboard_compare: no rank for '" + lang + "'");
        }
        LeaderboardRow row{lang, rank_it->second, our_v, best.rows.at(lang),
                           our_v - best.rows.at(lang)};
        if (row.rank == 1) ++report.first_place;
        if (row.rank <= 3) ++report.top3;
        if (row.rank <= 10) ++report.top10;
        report.rows.push_back(row);
    }
    report.ours_mean = mean_of(ours.rows);
    if (overall_best_mean) {
        report.mean_delta = report.ours_mean - *overall_best_mean;
    }
    return report;
}

std::string format_f1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string format_delta_pct(double d) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%+.1f%%", d * 100.0);
    return buf;
}

namespace {

struct TableWriter {
    RenderFormat format;
    std::ostringstream out;

    void row(const std::vector<std::string>& cells) {
        if (format == RenderFormat::csv) {
            for (size_t i = 0; i < cells.size(); ++i) {
                if (i) out << ',';
                out << cells[i];
            }
            out << '\n';
        } else {
            out << '|';
            for (const auto& c : cells) out << ' ' << c << " |";
            out << '\n';
        }
    }

    void divider(size_t n) {
        if (format == RenderFormat::markdown) {
            out << '|';
            for (size_t i = 0; i < n; ++i) out << " --- |";
            out << '\n';
        }
    }
};

}  // namespace

std::string render(const ResultTable& table, RenderFormat format) {
    TableWriter w{format, {}};
    w.row({"lang", "f1"});
    w.divider(2);
    if (table.rows.empty()) {
        return w.out.str();  // header-only
    }
    for (const auto& [lang, v] : table.rows) {
        w.row({lang, format_f1(v)});
    }
    w.row({"Mean", format_f1(table.mean)});
    return w.out.str();
}

std::string render_delta(const ResultTable& a, const ResultTable& b, const DeltaTable& d,
                         RenderFormat format) {
    TableWriter w{format, {}};
    w.row({"lang", a.name, b.name, "delta"});
    w.divider(4);
    for (const auto& [lang, delta] : d.deltas) {
        w.row({lang, format_f1(a.rows.at(lang)), format_f1(b.rows.at(lang)),
               format_delta_pct(delta)});
    }
    w.row({"Mean", format_f1(a.mean), format_f1(b.mean), format_delta_pct(d.mean_delta)});
    return w.out.str();
}

std::string render_leaderboard(const LeaderboardReport& report, RenderFormat format) {
    TableWriter w{format, {}};
    w.row({"lang", "rank", "ours", "best", "delta"});
    w.divider(5);
    for (const auto& row : report.rows) {
        w.row({row.lang, std::to_string(row.rank), format_f1(row.ours), format_f1(row.best),
               format_delta_pct(row.delta)});
    }
    w.row({"Mean", "", format_f1(report.ours_mean), "",
           report.mean_delta ? format_delta_pct(*report.mean_delta) : ""});
    return w.out.str();
}

std::string render_histogram(const StrategyHistogram& h, RenderFormat format) {
    TableWriter w{format, {}};
    w.row({"strategy", "languages_won"});
    w.divider(2);
    for (const auto& [kind, count] : h.by_kind) {
        w.row({kind, std::to_string(count)});
    }
    w.row({"ensemble_total", std::to_string(h.ensemble_total)});
    w.row({"total", std::to_string(h.total)});
    return w.out.str();
}

namespace {

nlohmann::json load_json_file(const std::filesystem::path& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + what + ": " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(what + " parse error in " + path.string() + ": " + e.what());
    }
    return j;
}

}  // namespace

ResultsFixture load_results_fixture(const std::filesystem::path& path) {
    const auto j = load_json_file(path, "results fixture");
    ResultsFixture fx;
    std::map<std::string, double> sub1, sub4;
    for (const auto& row : j.at("rows")) {
        const auto lang = row.at("lang").get<std::string>();
        sub1[lang] = row.at("sub1").get<double>();
        sub4[lang] = row.at("sub4").get<double>();

        const auto delta = row.at("delta").get<std::string>();
        if (delta.empty() || (delta[0] != '+' && delta[0] != '-')) {
            throw ValidationError("results fixture: delta for '" + lang +
                                  "' must carry an explicit sign");
        }
        fx.delta_signs[lang] = delta[0] == '+' ? 1 : -1;

        TunedDecision d;
        d.lang = LanguageCode(lang);
        d.strategy.kind = strategy_kind_from_string(row.at("strategy").get<std::string>());
        if (row.contains("weight")) {
            d.strategy.weight = row.at("weight").get<double>();
        }
        d.threshold = row.at("threshold").get<double>();
        fx.decisions.push_back(std::move(d));
    }
    fx.sub1 = aggregate("sub1", sub1);
    fx.sub4 = aggregate("sub4", sub4);
    return fx;
}

LeaderboardFixture load_leaderboard_fixture(const std::filesystem::path& path) {
    const auto j = load_json_file(path, "leaderboard fixture");
    LeaderboardFixture fx;
    std::map<std::string, double> ours, best;
    for (const auto& row : j.at("rows")) {
        const auto lang = row.at("lang").get<std::string>();
        ours[lang] = row.at("ours").get<double>();
        best[lang] = row.at("best").get<double>();
        fx.ranks[lang] = row.at("rank").get<int>();
    }
    fx.ours = aggregate("ours", ours);
    fx.best = aggregate("best", best);
    fx.overall_best_mean = j.at("avg").at("best").get<double>();
    fx.published_avg_delta = j.at("avg").at("delta").get<double>();
    return fx;
}

}  // namespace polar
