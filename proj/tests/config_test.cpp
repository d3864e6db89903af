#include <sstream>

#include <gtest/gtest.h>

#include "vrcmf/config.hpp"
#include "vrcmf/error.hpp"

using namespace vrcmf;

TEST(Variant, NamesRoundTrip) {
    for (auto v : {Variant::pmf, Variant::convmf, Variant::convmf_plus, Variant::rconvmf, Variant::vconvmf,
                   Variant::vrconvmf})
        EXPECT_EQ(parse_variant(to_string(v)), v);
    EXPECT_EQ(parse_variant("vrconvmf"), Variant::vrconvmf);
    EXPECT_EQ(parse_variant("convmf-plus"), Variant::convmf_plus);
    EXPECT_THROW(parse_variant("svd"), Error);
}

TEST(Variant, Capabilities) {
    EXPECT_EQ(text_model(Variant::pmf), TextModel::none);
    EXPECT_EQ(text_model(Variant::convmf_plus), TextModel::cnn);
    EXPECT_EQ(text_model(Variant::vrconvmf), TextModel::rcnn);
    EXPECT_TRUE(uses_visual(Variant::vconvmf));
    EXPECT_FALSE(uses_visual(Variant::rconvmf));
    EXPECT_FALSE(learns_prior(Variant::pmf));
    EXPECT_TRUE(learns_prior(Variant::convmf));
}

TEST(TrainConfig, ConfidenceAlwaysOnForPlus) {
    TrainConfig c;
    c.variant = Variant::convmf_plus;
    EXPECT_TRUE(c.confidence_enabled());
    c.variant = Variant::convmf;
    EXPECT_FALSE(c.confidence_enabled());
    c.confidence = true;
    EXPECT_TRUE(c.confidence_enabled());
}

TEST(TrainConfig, TextDimDefaultsToK) {
    TrainConfig c;
    c.k = 7;
    EXPECT_EQ(c.effective_text_dim(), 7u);
    c.text_dim = 20;
    EXPECT_EQ(c.effective_text_dim(), 20u);
}

TEST(TrainConfig, ValidateRejects) {
    auto bad = [](auto mutate) {
        TrainConfig c;
        mutate(c);
        EXPECT_THROW(c.validate(), Error);
    };
    bad([](TrainConfig& c) { c.k = 0; });
    bad([](TrainConfig& c) { c.lambda_v = 0; });
    bad([](TrainConfig& c) { c.iterations = 0; });
    bad([](TrainConfig& c) { c.dropout = 1.0; });
    bad([](TrainConfig& c) { c.context_window = 2; });
    bad([](TrainConfig& c) { c.cnn_windows.clear(); });
    bad([](TrainConfig& c) {
        c.variant = Variant::vconvmf;
        c.visual_levels.clear();
    });
    EXPECT_NO_THROW(TrainConfig{}.validate());
}

TEST(ConfigFile, ParsesSettingsAndComments) {
    std::istringstream in(
        "# experiment\n"
        "variant = VRConvMF\n"
        "k=8   # inline comment\n"
        "lambda_v = 1e2\n"
        "cnn_windows = 2,3\n"
        "confidence = on\n"
        "distance = square\n"
        "visual_levels = 2,4\n"
        "\n");
    TrainConfig c;
    load_config(in, c);
    EXPECT_EQ(c.variant, Variant::vrconvmf);
    EXPECT_EQ(c.k, 8u);
    EXPECT_EQ(c.lambda_v, 100.0);
    EXPECT_EQ(c.cnn_windows, (std::vector<std::size_t>{2, 3}));
    EXPECT_TRUE(c.confidence);
    EXPECT_EQ(c.confidence_params.distance, DistanceFunction::square);
    EXPECT_EQ(c.visual_levels, (std::vector<int>{2, 4}));
}

TEST(ConfigFile, ErrorsNameTheLine) {
    auto error_of = [](const std::string& text) {
        std::istringstream in(text);
        TrainConfig c;
        try {
            load_config(in, c, "run.cfg");
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(error_of("k = 5\nmystery = 1\n").find("run.cfg:2"), std::string::npos);
    EXPECT_NE(error_of("k = 5\nmystery = 1\n").find("mystery"), std::string::npos);
    EXPECT_NE(error_of("k five\n").find("run.cfg:1"), std::string::npos);
    EXPECT_NE(error_of("k = -3\n").find("run.cfg:1"), std::string::npos);
    EXPECT_NE(error_of("clamp = maybe\n"), "");
}

TEST(ConfigFile, SettingsRoundTrip) {
    TrainConfig a;
    a.variant = Variant::rconvmf;
    a.lambda_w = 0.1 + 0.2;
    a.seed = 18446744073709551615ULL;
    a.context_window = 5;
    a.glove_warm_start = true;
    TrainConfig b;
    for (const auto& [k, v] : config_settings(a)) apply_setting(b, k, v);
    EXPECT_EQ(config_settings(a), config_settings(b));
    EXPECT_EQ(b.lambda_w, a.lambda_w);
    EXPECT_EQ(b.seed, a.seed);
}
