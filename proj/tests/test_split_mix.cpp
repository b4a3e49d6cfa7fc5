#include <doctest.h>

#include <random>
#include <set>

#include "polar/split_mix.hpp"
#include "polar/types.hpp"

using namespace polar;

namespace {

Dataset make_real(const std::string& lang, int n_pos, int n_neg) {
    Dataset d;
    d.lang = LanguageCode(lang);
    int seq = 0;
    for (int i = 0; i < n_pos; ++i) {
        d.samples.push_back(Sample{.id = "r" + std::to_string(seq++),
                                   .lang = LanguageCode(lang),
                                   .text = "real sample number " + std::to_string(seq),
                                   .label = 1});
    }
    for (int i = 0; i < n_neg; ++i) {
        d.samples.push_back(Sample{.id = "r" + std::to_string(seq++),
                                   .lang = LanguageCode(lang),
                                   .text = "real sample number " + std::to_string(seq),
                                   .label = 0});
    }
    return d;
}

Dataset make_pool(const std::string& lang, int n) {
    Dataset d;
    d.lang = LanguageCode(lang);
    for (int i = 0; i < n; ++i) {
        d.samples.push_back(Sample{.id = "syn" + std::to_string(i),
                                   .lang = LanguageCode(lang),
                                   .text = "synthetic sample number " + std::to_string(i),
                                   .label = i % 2,
                                   .source = Source::synthetic,
                                   .strategy = Strategy::direct});
    }
    return d;
}

std::pair<long, long> label_counts(const Dataset& d) {
    long pos = 0, neg = 0;
    for (const auto& s : d.samples) {
        (s.label == 1 ? pos : neg) += 1;
    }
    return {pos, neg};
}

}  // namespace

TEST_CASE("exact proportions on a clean 60/40 dataset") {
    const auto d = make_real("eng", 60, 40);
    const auto r = stratified_split(d, 0.8, 42);
    CHECK(r.train.size() == 80);
    CHECK(r.validation.size() == 20);
    const auto [train_pos, train_neg] = label_counts(r.train);
    CHECK(train_pos == 48);
    CHECK(train_neg == 32);
}

TEST_CASE("remainder slot goes to the larger fractional part") {
    // 3 positives, 2 negatives at 0.8: floors 2+1, remainders 0.4 vs 0.6,
    // so class 0 takes the leftover slot.
    const auto d = make_real("eng", 3, 2);
    const auto r = stratified_split(d, 0.8, 42);
    CHECK(r.train.size() == 4);
    const auto [train_pos, train_neg] = label_counts(r.train);
    CHECK(train_pos == 2);
    CHECK(train_neg == 2);
}

TEST_CASE("decimal ratios floor the way the decimals read") {
    // 0.29 * 100 sits at 28.999999999999996 in binary; the split must
    // still take 29, not 28.
    const auto hundred = make_real("eng", 100, 0);
    CHECK(stratified_split(hundred, 0.29, 1).train.size() == 29);
    const auto ten = make_real("eng", 10, 0);
    CHECK(stratified_split(ten, 0.7, 1).train.size() == 7);
    const auto mixed = make_real("eng", 58, 42);
    CHECK(stratified_split(mixed, 0.29, 1).train.size() == 29);
}

TEST_CASE("split is deterministic and seed-sensitive") {
    const auto d = make_real("khm", 50, 5);
    const auto a = stratified_split(d, 0.8, 42);
    const auto b = stratified_split(d, 0.8, 42);
    REQUIRE(a.train.size() == b.train.size());
    CHECK(a.train == b.train);
    CHECK(a.validation == b.validation);

    const auto c = stratified_split(d, 0.8, 43);
    CHECK(a.train != c.train);  // different seed shuffles differently
}

TEST_CASE("split rejects synthetic samples and degenerate ratios") {
    auto d = make_real("eng", 4, 4);
    CHECK_THROWS_AS(stratified_split(d, 0.0, 42), ConfigError);
    CHECK_THROWS_AS(stratified_split(d, 1.0, 42), ConfigError);
    d.samples[0].source = Source::synthetic;
    d.samples[0].strategy = Strategy::direct;
    CHECK_THROWS_AS(stratified_split(d, 0.8, 42), ValidationError);
}

TEST_CASE("partition and proportion properties over many imbalanced fixtures") {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> base(5, 60);
    std::uniform_int_distribution<int> imbalance(1, 10);
    for (int k = 0; k < 120; ++k) {
        const int minority = base(rng);
        const int majority = minority * imbalance(rng);
        const bool pos_major = k % 2 == 0;
        const auto d =
            make_real("eng", pos_major ? majority : minority, pos_major ? minority : majority);
        const auto r = stratified_split(d, 0.8, 42 + k);

        // partition: disjoint ids, union = input
        std::set<std::string> train_ids, val_ids;
        for (const auto& s : r.train.samples) train_ids.insert(s.id);
        for (const auto& s : r.validation.samples) val_ids.insert(s.id);
        CHECK(train_ids.size() == r.train.size());
        CHECK(train_ids.size() + val_ids.size() == d.size());
        for (const auto& id : val_ids) {
            CHECK(train_ids.count(id) == 0);
        }
        CHECK(r.train.size() ==
              static_cast<size_t>(std::floor(0.8 * static_cast<double>(d.size()))));

        // per-class train share within one sample of ratio * n_class
        const auto [dp, dn] = label_counts(d);
        const auto [tp, tn] = label_counts(r.train);
        CHECK(std::abs(static_cast<double>(tp) - 0.8 * static_cast<double>(dp)) <= 1.0);
        CHECK(std::abs(static_cast<double>(tn) - 0.8 * static_cast<double>(dn)) <= 1.0);

        // validation holds only real samples by construction
        for (const auto& s : r.validation.samples) {
            CHECK(s.source == Source::real);
        }
    }
}

TEST_CASE("mix hits the exact 30 percent target") {
    const auto train = make_real("eng", 350, 350);
    const auto pool = make_pool("eng", 1000);
    const auto r = mix_synthetic(train, pool, 0.3, 42);
    CHECK(r.plan.n_synth_target == 300);
    CHECK(r.plan.n_synth_used == 300);
    CHECK(!r.plan.capped);
    CHECK(r.mixed.size() == 1000);

    long synth = 0;
    for (const auto& s : r.mixed.samples) {
        if (s.source == Source::synthetic) ++synth;
    }
    CHECK(synth == 300);
}

TEST_CASE("zero ratio returns the training set unchanged") {
    const auto train = make_real("eng", 10, 10);
    const auto pool = make_pool("eng", 50);
    const auto r = mix_synthetic(train, pool, 0.0, 42);
    CHECK(r.mixed == train);
    CHECK(r.plan.n_synth_used == 0);
    CHECK(!r.plan.capped);
}

TEST_CASE("target larger than the pool caps") {
    const auto train = make_real("eng", 250, 250);
    const auto pool = make_pool("eng", 400);
    const auto r = mix_synthetic(train, pool, 0.5, 42);
    CHECK(r.plan.n_synth_target == 500);
    CHECK(r.plan.n_synth_used == 400);
    CHECK(r.plan.capped);
}

TEST_CASE("mix validates inputs") {
    const auto train = make_real("eng", 5, 5);
    CHECK_THROWS_AS(mix_synthetic(train, make_pool("khm", 5), 0.3, 42), ValidationError);
    CHECK_THROWS_AS(mix_synthetic(train, make_real("eng", 2, 2), 0.3, 42), ValidationError);
    CHECK_THROWS_AS(mix_synthetic(train, make_pool("eng", 5), 1.0, 42), ConfigError);
}

TEST_CASE("mix output is real block then synthetic block, deterministic") {
    const auto train = make_real("eng", 6, 6);
    const auto pool = make_pool("eng", 30);
    const auto a = mix_synthetic(train, pool, 0.25, 42);
    const auto b = mix_synthetic(train, pool, 0.25, 42);
    CHECK(a.mixed == b.mixed);

    // real block preserves training order, synthetic block follows
    for (size_t i = 0; i < train.size(); ++i) {
        CHECK(a.mixed.samples[i].id == train.samples[i].id);
    }
    for (size_t i = train.size(); i < a.mixed.size(); ++i) {
        CHECK(a.mixed.samples[i].source == Source::synthetic);
    }

    // target across the stated ratio grid
    for (double r : {0.0, 0.1, 0.2, 0.3, 0.5}) {
        const auto mixed = mix_synthetic(train, pool, r, 42);
        const long expected =
            r == 0.0 ? 0 : std::llround(r * 12.0 / (1.0 - r));
        CHECK(mixed.plan.n_synth_target == expected);
    }
}
