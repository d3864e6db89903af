#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vrcmf/error.hpp"
#include "vrcmf/model_io.hpp"
#include "vrcmf/trainer.hpp"

using namespace vrcmf;

namespace {

ModelArtifact trained_artifact(Variant v) {
    auto train = vrcmf::testkit::random_ratings(6, 5, 0.5, 1);
    const std::size_t visual = uses_visual(v) ? 3 : 0;
    auto side = vrcmf::testkit::random_side_data(5, 7, visual, 1);
    auto config = vrcmf::testkit::small_config(v);
    config.iterations = 2;
    config.seed = 0xfedcba9876543210ULL;
    auto model = fit(train, nullptr, side, config);
    ModelArtifact a;
    a.config = config;
    for (auto id : {"u0", "u1", "u2", "u3", "u4", "u5"}) a.users.add(id);
    for (auto id : {"i0", "i1", "i2", "i3", "i4"}) a.items.add(id);
    a.factors = model.factors;
    a.network = model.network;
    a.vocab_size = side.vocab_size;
    a.visual_dim = visual;
    a.best_iteration = model.best_iteration;
    return a;
}

}  // namespace

TEST(ModelIo, RoundTripIsExact) {
    for (auto v : {Variant::pmf, Variant::convmf_plus, Variant::rconvmf, Variant::vrconvmf}) {
        auto a = trained_artifact(v);
        std::stringstream buf;
        save_model(buf, a);
        auto b = load_model(buf);
        EXPECT_EQ(b.config.variant, v);
        EXPECT_EQ(b.config.seed, a.config.seed);
        EXPECT_EQ(b.factors.users, a.factors.users);
        EXPECT_EQ(b.factors.items, a.factors.items);
        EXPECT_EQ(b.users.ids(), a.users.ids());
        EXPECT_EQ(b.best_iteration, a.best_iteration);
        auto pa = a.network.params();
        auto pb = b.network.params();
        ASSERT_EQ(pa.size(), pb.size());
        for (std::size_t t = 0; t < pa.size(); ++t)
            EXPECT_TRUE(std::equal(pa[t].values.begin(), pa[t].values.end(), pb[t].values.begin()));
        std::stringstream again;
        save_model(again, b);
        buf.clear();
        buf.seekg(0);
        EXPECT_EQ(again.str(), buf.str());
    }
}

TEST(ModelIo, PredictByRawIds) {
    auto a = trained_artifact(Variant::pmf);
    const double want = a.factors.users.col(2).dot(a.factors.items.col(4));
    EXPECT_DOUBLE_EQ(a.predict("u2", "i4", false), want);
    try {
        a.predict("nobody", "i0", false);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("'nobody'"), std::string::npos);
    }
    EXPECT_THROW(a.item_index("i9"), Error);
}

TEST(ModelIo, RejectsForeignOrNewerFiles) {
    std::istringstream junk("hello world\n");
    EXPECT_THROW(load_model(junk), ParseError);
    std::istringstream newer("vrcmf-model 2\n");
    EXPECT_THROW(load_model(newer), ParseError);
    auto a = trained_artifact(Variant::convmf);
    std::stringstream buf;
    save_model(buf, a);
    std::string cut = buf.str().substr(0, buf.str().size() / 2);
    std::istringstream truncated(cut);
    EXPECT_THROW(load_model(truncated), Error);
    EXPECT_THROW(load_model(std::string("/nonexistent/model.bin")), Error);
}
