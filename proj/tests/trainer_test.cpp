#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vrcmf/error.hpp"
#include "vrcmf/metrics.hpp"
#include "vrcmf/trainer.hpp"

using namespace vrcmf;
using vrcmf::testkit::random_ratings;
using vrcmf::testkit::random_side_data;
using vrcmf::testkit::small_config;

namespace {

class HalfSweepRecorder : public FitObserver {
public:
    bool wants_half_sweeps() const override { return true; }
    void on_half_sweep(SweepPhase, std::size_t, double before, double after) override {
        worst = std::max(worst, (after - before) / std::max(1.0, std::fabs(before)));
        ++count;
    }
    double worst = -1.0;
    int count = 0;
};

struct Toy {
    RatingsMatrix train, validation;
    ItemSideData side;
};

Toy make_toy(std::uint64_t seed, std::size_t visual_dim = 0) {
    auto all = random_ratings(20, 15, 0.35, seed);
    auto split = split_dataset(all, {0.7, 0.2, 0.1}, seed);
    return {all.subset(split.train), all.subset(split.validation), random_side_data(15, 9, visual_dim, seed)};
}

}  // namespace

TEST(Fit, ZeroIterationsIsRejected) {
    auto toy = make_toy(1);
    auto config = small_config(Variant::pmf);
    config.iterations = 0;
    try {
        fit(toy.train, nullptr, toy.side, config);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("iterations >= 1"), std::string::npos);
    }
}

TEST(Fit, TextVariantsNeedDocuments) {
    auto toy = make_toy(2);
    EXPECT_THROW(fit(toy.train, nullptr, ItemSideData{}, small_config(Variant::convmf)), Error);
    EXPECT_THROW(fit(toy.train, nullptr, toy.side, small_config(Variant::vconvmf)), Error);
    EXPECT_NO_THROW(fit(toy.train, nullptr, ItemSideData{}, small_config(Variant::pmf)));
}

TEST(Fit, SameSeedSameModel) {
    auto toy = make_toy(3, 4);
    for (auto v : {Variant::pmf, Variant::convmf_plus, Variant::vrconvmf}) {
        auto config = small_config(v);
        config.dropout = 0.3;
        auto a = fit(toy.train, &toy.validation, toy.side, config);
        auto b = fit(toy.train, &toy.validation, toy.side, config);
        EXPECT_EQ(a.factors.users, b.factors.users) << to_string(v);
        EXPECT_EQ(a.factors.items, b.factors.items);
        std::ostringstream la, lb;
        write_training_log(la, a.log);
        write_training_log(lb, b.log);
        EXPECT_EQ(la.str(), lb.str());
        config.seed = 2;
        auto c = fit(toy.train, &toy.validation, toy.side, config);
        EXPECT_NE(a.factors.users, c.factors.users);
    }
}

TEST(Fit, ReturnsBestValidationIterate) {
    auto toy = make_toy(4);
    auto config = small_config(Variant::convmf);
    config.iterations = 8;
    auto model = fit(toy.train, &toy.validation, toy.side, config);
    ASSERT_EQ(model.log.size(), 8u);
    std::size_t best = 0;
    for (std::size_t i = 0; i < model.log.size(); ++i)
        if (model.log[i].val_rmse < model.log[best].val_rmse) best = i;
    EXPECT_EQ(model.best_iteration, best + 1);
    EXPECT_NEAR(evaluate_rmse(model.factors, toy.validation), model.log[best].val_rmse, 1e-12);
}

TEST(Fit, WithoutValidationKeepsLastIterate) {
    auto toy = make_toy(5);
    auto model = fit(toy.train, nullptr, toy.side, small_config(Variant::rconvmf));
    EXPECT_EQ(model.best_iteration, 5u);
    EXPECT_TRUE(std::isnan(model.log.back().val_rmse));
    EXPECT_NEAR(evaluate_rmse(model.factors, toy.train), model.log.back().train_rmse, 1e-12);
}

TEST(Fit, HalfSweepsAreMonotone) {
    for (auto v : {Variant::pmf, Variant::convmf, Variant::convmf_plus}) {
        for (std::uint64_t seed = 1; seed <= 4; ++seed) {
            auto toy = make_toy(seed);
            auto config = small_config(v);
            config.iterations = 10;
            config.seed = seed;
            HalfSweepRecorder rec;
            fit(toy.train, nullptr, toy.side, config, {&rec, nullptr});
            EXPECT_EQ(rec.count, 20);
            EXPECT_LE(rec.worst, 1e-9) << to_string(v) << " seed " << seed;
        }
    }
}

TEST(Fit, UnratedItemsSitOnTheirPrior) {
    auto all = random_ratings(10, 6, 0.5, 8);
    std::vector<std::size_t> keep;
    for (std::size_t p = 0; p < all.size(); ++p)
        if (all.entries()[p].item != 5) keep.push_back(p);
    auto train = all.subset(keep);
    auto side = random_side_data(6, 9, 0, 8);
    auto model = fit(train, nullptr, side, small_config(Variant::convmf));
    EXPECT_LE((model.factors.items.col(5) - model.priors.col(5)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Fit, PretrainedEmbeddingsMustMatch) {
    auto toy = make_toy(6);
    Eigen::MatrixXd wrong = Eigen::MatrixXd::Ones(4, 3);
    EXPECT_THROW(fit(toy.train, nullptr, toy.side, small_config(Variant::convmf), {nullptr, &wrong}), Error);
    Eigen::MatrixXd right = Eigen::MatrixXd::Ones(4, 9);
    EXPECT_NO_THROW(fit(toy.train, nullptr, toy.side, small_config(Variant::convmf), {nullptr, &right}));
}

TEST(TrainingLog, CsvLayout) {
    std::vector<IterationLog> log{{1, 12.5, 0.9, std::nan("")}, {2, 10.0, 0.8123456789, 0.95}};
    std::ostringstream out;
    write_training_log(out, log);
    EXPECT_EQ(out.str(),
              "iter,loss,train_rmse,val_rmse\n"
              "1,12.500000,0.900000,nan\n"
              "2,10.000000,0.812346,0.950000\n");
}
