#include "polar/split_mix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "polar/numeric.hpp"
#include "polar/rng.hpp"

namespace polar {

namespace {

Dataset subset_in_order(const Dataset& d, const std::unordered_set<std::string>& ids) {
    Dataset out;
    out.lang = d.lang;
    for (const auto& s : d.samples) {
        if (ids.count(s.id)) {
            out.samples.push_back(s);
        }
    }
    return out;
}

}  // namespace

SplitResult stratified_split(const Dataset& d, double ratio, uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw ConfigError("split ratio must lie strictly inside (0,1)");
    }
    for (const auto& s : d.samples) {
        if (s.source != Source::real) {
            throw ValidationError("stratified_split: synthetic sample '" + s.id +
                                  "' in input; split real data before mixing");
        }
        if (s.label != 0 && s.label != 1) {
            throw ValidationError("stratified_split: sample '" + s.id + "' has invalid label");
        }
    }

    const std::string lang = d.lang ? d.lang->str() : "";
    std::array<std::vector<std::string>, 2> ids_by_label;
    for (const auto& s : d.samples) {
        ids_by_label[s.label].push_back(s.id);
    }

    // Per class: floor(ratio * n_class), then hand the leftover slots
    // (up to the global floor(ratio * n)) to classes by descending
    // fractional part, ties by label ascending.
    const long global_train = floor_share(ratio * static_cast<double>(d.size()));
    std::array<long, 2> train_n{};
    std::array<double, 2> frac{};
    long assigned = 0;
    for (int label = 0; label < 2; ++label) {
        const double exact = ratio * static_cast<double>(ids_by_label[label].size());
        train_n[label] = floor_share(exact);
        frac[label] = exact - static_cast<double>(train_n[label]);
        assigned += train_n[label];
    }
    long leftover = global_train - assigned;
    std::array<int, 2> order{0, 1};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (frac[a] != frac[b]) return frac[a] > frac[b];
        return a < b;
    });
    for (int k = 0; k < 2 && leftover > 0; ++k) {
        const int label = order[k];
        const long room = static_cast<long>(ids_by_label[label].size()) - train_n[label];
        const long take = std::min(leftover, room);
        train_n[label] += take;
        leftover -= take;
    }

    std::unordered_set<std::string> train_ids;
    for (int label = 0; label < 2; ++label) {
        auto& ids = ids_by_label[label];
        std::sort(ids.begin(), ids.end());
        auto stream = seeded_stream(seed, {lang, std::to_string(label)});
        fisher_yates(ids, stream);
        for (long i = 0; i < train_n[label]; ++i) {
            train_ids.insert(ids[static_cast<size_t>(i)]);
        }
    }

    std::unordered_set<std::string> val_ids;
    for (const auto& s : d.samples) {
        if (!train_ids.count(s.id)) {
            val_ids.insert(s.id);
        }
    }

    SplitResult r{.train = subset_in_order(d, train_ids),
                  .validation = subset_in_order(d, val_ids),
                  .seed = seed,
                  .ratio = ratio};
    return r;
}

nlohmann::json MixPlan::to_json() const {
    return nlohmann::json{{"synth_ratio", synth_ratio},
                          {"n_real", n_real},
                          {"n_synth_target", n_synth_target},
                          {"n_synth_used", n_synth_used},
                          {"capped", capped}};
}

MixResult mix_synthetic(const Dataset& train, const Dataset& pool, double r, uint64_t seed) {
    if (!(r >= 0.0 && r < 1.0)) {
        throw ConfigError("synthetic ratio must lie in [0,1)");
    }
    for (const auto& s : pool.samples) {
        if (s.source != Source::synthetic) {
            throw ValidationError("mix_synthetic: real sample '" + s.id + "' in synthetic pool");
        }
    }
    if (train.lang && pool.lang && *train.lang != *pool.lang) {
        throw ValidationError("mix_synthetic: language mismatch (" + train.lang->str() + " vs " +
                              pool.lang->str() + ")");
    }

    MixPlan plan;
    plan.synth_ratio = r;
    plan.n_real = static_cast<long>(train.size());
    // r is the synthetic fraction of the final set: k/(n_real+k) = r.
    plan.n_synth_target =
        r == 0.0 ? 0
                 : std::llround(r * static_cast<double>(plan.n_real) / (1.0 - r));
    plan.n_synth_used = std::min<long>(plan.n_synth_target, static_cast<long>(pool.size()));
    plan.capped = static_cast<long>(pool.size()) < plan.n_synth_target;

    std::vector<std::string> pool_ids;
    pool_ids.reserve(pool.size());
    for (const auto& s : pool.samples) {
        pool_ids.push_back(s.id);
    }
    std::sort(pool_ids.begin(), pool_ids.end());

    const std::string lang = train.lang ? train.lang->str()
                                        : (pool.lang ? pool.lang->str() : "");
    auto stream = seeded_stream(seed, {lang, "mix"});
    fisher_yates(pool_ids, stream, static_cast<size_t>(plan.n_synth_used));

    std::vector<std::string> chosen(pool_ids.begin(),
                                    pool_ids.begin() + plan.n_synth_used);
    std::sort(chosen.begin(), chosen.end());  // stable synthetic block order

    std::unordered_map<std::string, const Sample*> pool_by_id;
    for (const auto& s : pool.samples) {
        pool_by_id.emplace(s.id, &s);
    }

    MixResult result;
    result.plan = plan;
    result.mixed.lang = train.lang ? train.lang : pool.lang;
    result.mixed.samples = train.samples;
    for (const auto& id : chosen) {
        result.mixed.samples.push_back(*pool_by_id.at(id));
    }
    return result;
}

}  // namespace polar
