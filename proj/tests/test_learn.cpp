#include <array>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "learn_fixtures.hpp"
#include "mircorpus/error.hpp"
#include "mircorpus/learn/dataset.hpp"
#include "mircorpus/learn/models.hpp"
#include "test_support.hpp"

using namespace mircorpus;
using namespace mircorpus::learn;

namespace {

std::set<std::string> songs_of(const SegmentDataset& ds)
{
    std::set<std::string> s;
    for (const auto& r : ds.rows) s.insert(r.song_id);
    return s;
}

double classify_blobs(bool use_mlp, std::uint64_t seed)
{
    const auto ds = fixtures::blobs(10, 10, 1.0, seed);
    auto [train, test] = song_preserving_split(ds, 0.5, seed);
    const auto norm = Normalizer::fit(train);
    train = norm.apply(train);
    test = norm.apply(test);
    if (use_mlp) {
        MlpTraining opt;
        opt.seed = seed;
        return accuracy(predict_all(train_mlp(train, opt), test), labels_of(test));
    }
    return accuracy(predict_all(train_nb(train), test), labels_of(test));
}

}  // namespace

TEST_CASE("song preserving split")
{
    SegmentDataset two;
    two.classes = {"x"};
    two.rows = {{{}, 0, "a"}, {{}, 0, "a"}, {{}, 0, "b"}};
    const auto [tr, te] = song_preserving_split(two, 0.5, 3);
    CHECK(songs_of(tr).size() == 1);
    CHECK(songs_of(te).size() == 1);
    CHECK(tr.rows.size() + te.rows.size() == 3);

    const auto ds = fixtures::blobs(5, 4, 1.0, 1);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto [train, test] = song_preserving_split(ds, 0.5, seed);
        const auto a = songs_of(train), b = songs_of(test);
        std::vector<std::string> both;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
        CHECK(both.empty());
        CHECK(a.size() + b.size() == 10);
        CHECK(a.size() == 5);
        CHECK(train.rows.size() + test.rows.size() == ds.rows.size());
    }
    const auto s1 = song_preserving_split(ds, 0.5, 1);
    const auto s1b = song_preserving_split(ds, 0.5, 1);
    CHECK(songs_of(s1.first) == songs_of(s1b.first));
    bool differs = false;
    for (std::uint64_t seed = 2; seed < 10; ++seed)
        differs |= songs_of(song_preserving_split(ds, 0.5, seed).first) != songs_of(s1.first);
    CHECK(differs);

    SegmentDataset single;
    single.rows = {{{}, 0, "a"}, {{}, 0, "a"}};
    CHECK_THROWS_AS(song_preserving_split(single, 0.5, 1), Error);
}

TEST_CASE("stratified song split keeps every class on both sides")
{
    SegmentDataset ds;
    ds.classes = {"a", "b", "c"};
    const int songs_per_class[] = {4, 3, 1};
    for (int c = 0; c < 3; ++c)
        for (int s = 0; s < songs_per_class[c]; ++s)
            for (int r = 0; r < 2; ++r) ds.rows.push_back({{}, c, "c" + std::to_string(c) + "s" + std::to_string(s)});

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto [train, test] = stratified_song_split(ds, 0.5, seed);
        const auto a = songs_of(train), b = songs_of(test);
        std::vector<std::string> both;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
        CHECK(both.empty());
        CHECK(a.size() + b.size() == 8);
        std::array<int, 3> tr{}, te{};
        for (const auto& s : a) ++tr[static_cast<std::size_t>(s[1] - '0')];
        for (const auto& s : b) ++te[static_cast<std::size_t>(s[1] - '0')];
        CHECK(tr == std::array<int, 3>{2, 2, 1});  // round(1.5) = 2
        CHECK(te == std::array<int, 3>{2, 1, 0});
    }
    CHECK(songs_of(stratified_song_split(ds, 0.5, 4).first) == songs_of(stratified_song_split(ds, 0.5, 4).first));

    SegmentDataset lonely;
    lonely.classes = {"x", "y"};
    lonely.rows = {{{}, 0, "a"}, {{}, 1, "b"}};
    CHECK_THROWS_AS(stratified_song_split(lonely, 0.5, 1), Error);
}

TEST_CASE("era labels")
{
    CHECK(era_label(1993) == 0);
    CHECK(era_label(1997) == 0);
    CHECK(era_label(2000) == 1);
    CHECK(era_label(2001) == 1);
    CHECK(era_label(2003) == 2);
    CHECK(era_label(2016) == 2);
    for (int gap : {1998, 1999, 2002}) CHECK_THROWS_AS(era_label(gap), Error);
}

TEST_CASE("accuracy and percent formatting")
{
    const std::vector<int> y{0, 1, 2, 1};
    CHECK(accuracy(y, y) == 1.0);
    CHECK(accuracy(std::vector<int>{1, 0, 0, 0}, y) == 0.0);
    CHECK(format_percent(3979.0 / 12750.0) == "31.208%");
    CHECK(format_percent(1.0 / 9.0) == "11.111%");
    CHECK(format_percent(1.0 / 15.0) == "6.667%");
    CHECK(format_percent(1.0 / 3.0) == "33.333%");
    CHECK_THROWS_AS(accuracy(std::vector<int>{}, std::vector<int>{}), Error);
    CHECK_THROWS_AS(accuracy(std::vector<int>{1}, y), Error);
}

TEST_CASE("confusion matrix")
{
    const std::vector<int> truth{0, 0, 1, 1, 2}, pred{0, 1, 1, 1, 0};
    const auto m = confusion(pred, truth, 3);
    CHECK(m == ConfusionMatrix{{1, 1, 0}, {0, 2, 0}, {1, 0, 0}});
    const auto dir = scratch_dir("learn_confusion");
    write_confusion_csv(dir / "c.csv", m, std::vector<std::string>{"a", "b", "c"});
    CHECK(std::filesystem::file_size(dir / "c.csv") > 0);
}

TEST_CASE("normalizer fits on one set and applies to another")
{
    SegmentDataset train, test;
    train.rows = {{{}, 0, "a"}, {{}, 0, "b"}};
    train.rows[0].features.fill(2.0);
    train.rows[1].features.fill(6.0);
    train.rows[1].features[3] = 2.0;
    test.rows = {{{}, 0, "c"}};
    test.rows[0].features.fill(10.0);
    const auto n = Normalizer::fit(train);
    const auto t = n.apply(test);
    CHECK(t.rows[0].features[0] == 2.0);  // outside [0, 1] on unseen data
    CHECK(t.rows[0].features[3] == 0.0);  // constant in training
}

TEST_CASE("softmax sums to one")
{
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0.0, 30.0);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> z(1 + t % 12);
        for (double& v : z) v = n(rng);
        const auto p = softmax(z);
        double s = 0;
        for (double v : p) {
            CHECK(v >= 0.0);
            s += v;
        }
        CHECK(std::abs(s - 1.0) <= 1e-9);
    }
}

TEST_CASE("mlp forward pass matches a hand computation")
{
    MlpModel m = MlpModel::zeros(2, 2, 2);
    m.w1 = {0.5, -1.0, 2.0, 0.25};
    m.b1 = {0.1, -0.2};
    m.w2 = {1.0, -1.0, -0.5, 0.75};
    m.b2 = {0.0, 0.3};
    const std::vector<double> x{0.4, 0.8};
    const double h0 = 1 / (1 + std::exp(-(0.5 * 0.4 - 1.0 * 0.8 + 0.1)));
    const double h1 = 1 / (1 + std::exp(-(2.0 * 0.4 + 0.25 * 0.8 - 0.2)));
    const double z0 = h0 - h1, z1 = -0.5 * h0 + 0.75 * h1 + 0.3;
    const double p0 = std::exp(z0) / (std::exp(z0) + std::exp(z1));
    const auto p = mlp_forward(m, x);
    CHECK(p[0] == doctest::Approx(p0).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(1 - p0).epsilon(1e-14));
    CHECK(predict_mlp(m, x) == (p0 > 0.5 ? 0 : 1));
    CHECK_THROWS_AS(mlp_forward(m, std::vector<double>{1.0}), Error);
}

TEST_CASE("zero model predicts the first class")
{
    const auto m = MlpModel::zeros(41, 41, 4);
    features::FeatureVector x;
    x.fill(0.7);
    CHECK(predict_mlp(m, x) == 0);
    auto biased = m;
    biased.b2 = {0.0, 2.0, 1.0, 1.5};
    CHECK(predict_mlp(biased, x) == 1);
    biased.b2[3] = 1.9;  // still below the max
    CHECK(predict_mlp(biased, x) == 1);
}

TEST_CASE("mlp gradient matches central differences")
{
    const std::size_t inputs = 5, hidden = 4, outputs = 3;
    auto model = MlpModel::random(inputs, hidden, outputs, 42);
    // larger weights than the training init so the check is not near-linear
    for (auto* params : {&model.w1, &model.b1, &model.w2, &model.b2})
        for (double& w : *params) w *= 20.0;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    Matrix x(7, std::vector<double>(inputs));
    std::vector<int> y(7);
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (double& v : x[i]) v = n(rng);
        y[i] = static_cast<int>(i % outputs);
    }
    const auto g = mlp_gradient(model, x, y);
    const double h = 1e-5;
    double worst = 0.0;
    auto check = [&](std::vector<double> MlpModel::*params, const std::vector<double>& analytic) {
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            MlpModel plus = model, minus = model;
            (plus.*params)[i] += h;
            (minus.*params)[i] -= h;
            const double numeric = (mlp_loss(plus, x, y) - mlp_loss(minus, x, y)) / (2 * h);
            const double denom = std::max({std::abs(numeric), std::abs(analytic[i]), 1e-8});
            worst = std::max(worst, std::abs(numeric - analytic[i]) / denom);
        }
    };
    check(&MlpModel::w1, g.w1);
    check(&MlpModel::b1, g.b1);
    check(&MlpModel::w2, g.w2);
    check(&MlpModel::b2, g.b2);
    CHECK(worst < 1e-4);
}

TEST_CASE("mlp training lowers the loss and separates blobs")
{
    auto ds = fixtures::blobs(10, 10, 1.0, 7);
    auto [train, test] = song_preserving_split(ds, 0.5, 7);
    const auto norm = Normalizer::fit(train);
    std::vector<double> history;
    MlpTraining opt;
    opt.seed = 7;
    const auto model = train_mlp(norm.apply(train), opt, &history);
    REQUIRE(history.size() == 1001);
    CHECK(history.back() <= history.front());
    CHECK(model.epochs == 1000);
    CHECK(model.hidden == 41);
    CHECK(model.inputs == 41);
    CHECK(model.outputs == 2);
    CHECK(accuracy(predict_all(model, norm.apply(test)), labels_of(test)) >= 0.95);
    for (std::uint64_t seed : {1, 2, 3}) CHECK(classify_blobs(true, seed) >= 0.95);
}

TEST_CASE("mlp trained on one class always predicts it")
{
    auto ds = fixtures::blobs(3, 5, 1.0, 2);
    for (auto& r : ds.rows) r.label = 1;
    MlpTraining opt;
    opt.epochs = 300;
    const auto model = train_mlp(ds, opt);
    for (const auto& r : fixtures::blobs(3, 5, 1.0, 99).rows) CHECK(predict_mlp(model, r.features) == 1);
    SegmentDataset one_class = ds;
    one_class.classes = {"only"};
    CHECK_THROWS_AS(train_mlp(one_class), Error);
    CHECK_THROWS_AS(train_mlp(SegmentDataset{{}, {"a", "b"}}), Error);
}

TEST_CASE("training is deterministic per seed")
{
    const auto ds = fixtures::blobs(2, 5, 1.0, 3);
    MlpTraining opt;
    opt.epochs = 20;
    opt.seed = 11;
    const auto a = train_mlp(ds, opt), b = train_mlp(ds, opt);
    CHECK(a.w1 == b.w1);
    CHECK(a.w2 == b.w2);
    const auto init = MlpModel::random(41, 41, 2, 11);
    for (double w : init.w1) {
        CHECK(w >= -0.05);
        CHECK(w <= 0.05);
    }
}

TEST_CASE("naive Bayes separates blobs")
{
    for (std::uint64_t seed : {1, 2, 3}) CHECK(classify_blobs(false, seed) >= 0.95);
}

TEST_CASE("naive Bayes posterior matches a closed-form oracle")
{
    SegmentDataset ds;
    ds.classes = {"lo", "hi"};
    auto row = [](double v0, double v1, int label) {
        Segment s;
        s.features.fill(0.0);
        s.features[0] = v0;
        s.features[1] = v1;
        s.label = label;
        s.song_id = "x";
        return s;
    };
    ds.rows = {row(1, 2, 0), row(3, 2, 0), row(10, 0, 1), row(14, 4, 1)};
    const auto m = train_nb(ds, {0, 1});
    CHECK(m.priors == std::vector<double>{0.5, 0.5});
    CHECK(m.means[0] == std::vector<double>{2, 2});
    CHECK(m.variances[0][0] == 1.0);
    CHECK(m.variances[0][1] == kVarianceFloor);
    CHECK(m.variances[1][0] == 4.0);
    CHECK(m.variances[1][1] == 4.0);

    features::FeatureVector x{};
    x[0] = 5.0;
    x[1] = 2.0;
    auto logpdf = [](double v, double mu, double var) {
        return -0.5 * std::log(2 * std::numbers::pi * var) - (v - mu) * (v - mu) / (2 * var);
    };
    const double lo = std::log(0.5) + logpdf(5, 2, 1) + logpdf(2, 2, 1e-9);
    const double hi = std::log(0.5) + logpdf(5, 12, 4) + logpdf(2, 2, 4);
    const auto post = nb_log_posterior(m, x);
    CHECK(post[0] == doctest::Approx(lo).epsilon(1e-12));
    CHECK(post[1] == doctest::Approx(hi).epsilon(1e-12));
    CHECK(predict_nb(m, x) == (lo > hi ? 0 : 1));
}

TEST_CASE("naive Bayes rejects classes with a single row")
{
    SegmentDataset ds;
    ds.classes = {"a", "b"};
    ds.rows = {{{}, 0, "s1"}, {{}, 0, "s2"}, {{}, 1, "s3"}};
    try {
        train_nb(ds);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::insufficient_data);
        CHECK(std::string(e.what()).find("'b'") != std::string::npos);
    }
}

TEST_CASE("naive Bayes is shift invariant")
{
    const auto ds = fixtures::blobs(6, 6, 0.3, 12);
    const auto [train, test] = song_preserving_split(ds, 0.5, 4);
    auto shift = [](SegmentDataset d) {
        for (auto& r : d.rows)
            for (double& v : r.features) v += 37.5;
        return d;
    };
    CHECK(predict_all(train_nb(train), test) == predict_all(train_nb(shift(train)), shift(test)));
}

TEST_CASE("greedy selection finds the planted feature")
{
    for (std::size_t k : {0u, 13u, 29u, 40u}) {
        const auto ds = fixtures::planted(k, 6, 8, 100 + k);
        const auto r = greedy_select(ds, 5, 3);
        REQUIRE(!r.order.empty());
        CHECK(r.order.front() == k);
        CHECK(r.best_accuracy >= r.stage_accuracy.front());
        CHECK(r.best_accuracy == *std::max_element(r.stage_accuracy.begin(), r.stage_accuracy.end()));
        CHECK(r.best_subset.size() <= r.order.size());
        CHECK(std::equal(r.best_subset.begin(), r.best_subset.end(), r.order.begin()));
    }
    const auto one = greedy_select(fixtures::planted(7, 6, 8, 1), 1, 3);
    CHECK(one.order == std::vector<std::size_t>{7});
    CHECK(one.best_subset == std::vector<std::size_t>{7});
}

TEST_CASE("greedy best never falls below the best single feature")
{
    const auto ds = fixtures::blobs(6, 6, 0.15, 19);
    const auto [train, test] = song_preserving_split(ds, 0.5, 2);
    double best_single = 0.0;
    for (std::size_t k = 0; k < features::kFeatureCount; ++k)
        best_single = std::max(best_single, accuracy(predict_all(train_nb(train, {k}), test), labels_of(test)));
    const auto r = greedy_select(train, test, 6);
    CHECK(r.stage_accuracy.front() == best_single);
    CHECK(r.best_accuracy >= best_single);
}

TEST_CASE("model files round trip")
{
    const auto dir = scratch_dir("learn_models");
    const auto ds = fixtures::blobs(3, 4, 1.0, 8);
    MlpTraining opt;
    opt.epochs = 5;
    opt.seed = 77;
    const auto mlp = train_mlp(ds, opt);
    save_model(dir / "m.txt", mlp);
    const auto mlp_back = load_mlp(dir / "m.txt");
    CHECK(mlp_back.w1 == mlp.w1);
    CHECK(mlp_back.b2 == mlp.b2);
    CHECK(mlp_back.seed == 77);
    CHECK(mlp_back.epochs == 5);
    CHECK(mlp_back.classes == ds.classes);

    const auto nb = train_nb(ds, {3, 1, 4});
    save_model(dir / "nb.txt", nb);
    const auto nb_back = load_nb(dir / "nb.txt");
    CHECK(nb_back.subset == nb.subset);
    CHECK(nb_back.means == nb.means);
    CHECK(nb_back.variances == nb.variances);
    CHECK(predict_all(nb_back, ds) == predict_all(nb, ds));
    CHECK_THROWS_AS(load_nb(dir / "m.txt"), Error);
    CHECK_THROWS_AS(load_mlp(dir / "none.txt"), Error);
}

TEST_CASE("segments come from 2 s windows at 1 s hops")
{
    features::FeatureTrail trail;
    trail.song_id = "s";
    for (int i = 0; i < 173; ++i) {
        features::FeatureFrame f;
        f.t = i * features::kFramePeriod;
        f.values.fill(i);
        trail.frames.push_back(f);
    }
    const auto seg = make_segments(trail, 4);
    CHECK(seg.size() == 3);
    CHECK(seg[0].label == 4);
    CHECK(seg[0].song_id == "s");
}
