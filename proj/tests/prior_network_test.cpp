#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "vrcmf/error.hpp"
#include "vrcmf/prior_network.hpp"

using namespace vrcmf;
using vrcmf::testkit::small_config;

namespace {

PriorNetwork random_net(Variant v, std::size_t k, std::size_t vocab, std::size_t visual, std::uint64_t seed,
                        std::size_t text_dim = 0) {
    auto config = small_config(v, k);
    config.text_dim = text_dim;
    Rng rng(seed);
    return PriorNetwork::random(config, {v, k, vocab, visual}, rng);
}

void perturb(PriorNetwork& net, std::mt19937_64& rng, double scale) {
    std::normal_distribution<double> d(0.0, scale);
    for (auto& p : net.params())
        for (auto& x : p.values) x += d(rng);
    if (net.cnn) net.cnn->embedding.col(net.cnn->pad_index()).setZero();
    if (net.rcnn) net.rcnn->embedding.col(net.rcnn->pad_index()).setZero();
}

}  // namespace

TEST(PriorNetwork, PmfHasNoParametersAndZeroPrior) {
    auto net = PriorNetwork::zeros(small_config(Variant::pmf), {Variant::pmf, 3, 0, 0});
    EXPECT_TRUE(net.empty());
    std::vector<int> doc{0};
    EXPECT_EQ(compute_item_prior(net, 3, {doc, nullptr}), Eigen::VectorXd::Zero(3));
}

TEST(PriorNetwork, ZeroWeightsGiveZeroPrior) {
    for (auto v : {Variant::convmf, Variant::rconvmf, Variant::vconvmf, Variant::vrconvmf}) {
        auto net = PriorNetwork::zeros(small_config(v), {v, 3, 6, 4});
        std::vector<int> doc{1, 2, 5};
        Eigen::VectorXd vis = Eigen::VectorXd::Ones(4);
        EXPECT_EQ(compute_item_prior(net, 3, {doc, &vis}), Eigen::VectorXd::Zero(3)) << to_string(v);
    }
}

TEST(PriorNetwork, LayoutFollowsVariant) {
    auto text = random_net(Variant::convmf, 3, 6, 0, 1);
    EXPECT_TRUE(text.cnn && !text.rcnn && !text.fusion);
    EXPECT_EQ(text.cnn->output_dim(), 3u);
    auto fused = random_net(Variant::vrconvmf, 3, 6, 5, 1, 7);
    ASSERT_TRUE(fused.rcnn && fused.fusion);
    EXPECT_EQ(fused.text_dim(), 7u);
    EXPECT_EQ(fused.visual_dim(), 5u);
    EXPECT_EQ(fused.fusion->weight.rows(), 3);
    EXPECT_EQ(fused.fusion->weight.cols(), 12);
}

TEST(FusionHead, HandMatrixVectorProduct) {
    auto head = FusionHead::zeros(2, 3);
    head.weight << 1, 2, 3, -1, 0, 0.5;
    head.bias << 0.25, -4;
    Eigen::VectorXd x(3);
    x << 1, -1, 2;
    auto y = head.forward(x);
    EXPECT_NEAR(y(0), 1 - 2 + 6 + 0.25, 1e-12);
    EXPECT_NEAR(y(1), -1 + 1 - 4, 1e-12);
    EXPECT_THROW(head.forward(Eigen::VectorXd::Ones(4)), Error);
}

TEST(PriorNetwork, FusedPriorIsHeadOfConcatenation) {
    auto net = random_net(Variant::vconvmf, 3, 6, 4, 2);
    std::mt19937_64 rng(3);
    perturb(net, rng, 0.3);
    std::vector<int> doc{0, 3, 3, 1};
    Eigen::VectorXd vis = vrcmf::testkit::random_matrix(4, 1, rng);
    Eigen::VectorXd text = vrcmf::testkit::oracle_cnn(*net.cnn, doc);
    Eigen::VectorXd joint(7);
    joint << text, vis;
    Eigen::VectorXd want = net.fusion->bias;
    for (Eigen::Index r = 0; r < 3; ++r)
        for (Eigen::Index c = 0; c < 7; ++c) want(r) += net.fusion->weight(r, c) * joint(c);
    EXPECT_LE((compute_item_prior(net, 3, {doc, &vis}) - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(PriorNetwork, DimensionErrors) {
    auto config = small_config(Variant::vconvmf);
    EXPECT_THROW(PriorNetwork::zeros(config, {Variant::vconvmf, 3, 6, 0}), Error);
    EXPECT_THROW(PriorNetwork::zeros(config, {Variant::convmf, 3, 0, 0}), Error);
    auto net = random_net(Variant::vconvmf, 3, 6, 4, 1);
    std::vector<int> doc{1};
    Eigen::VectorXd wrong = Eigen::VectorXd::Ones(5);
    EXPECT_THROW(compute_item_prior(net, 3, {doc, &wrong}), Error);
    EXPECT_THROW(compute_item_prior(net, 3, {doc, nullptr}), Error);
    Eigen::VectorXd vis = Eigen::VectorXd::Ones(4);
    EXPECT_THROW(compute_item_prior(net, 4, {doc, &vis}), Error);
}

class NetworkGradientCheck : public ::testing::TestWithParam<Variant> {};

TEST_P(NetworkGradientCheck, MatchesFiniteDifferences) {
    const auto variant = GetParam();
    const bool visual = uses_visual(variant);
    std::mt19937_64 rng(static_cast<std::uint64_t>(variant) + 11);
    for (int toy = 0; toy < 3; ++toy) {
        auto net = random_net(variant, 3, 7, visual ? 4 : 0, rng(), 2);
        perturb(net, rng, 0.2);
        std::vector<std::vector<int>> docs;
        std::vector<Eigen::VectorXd> vis;
        std::vector<Eigen::VectorXd> masks;
        for (int e = 0; e < 3; ++e) {
            std::vector<int> d = vrcmf::testkit::random_tokens(7, 6, rng);
            while (d.size() < 3) d.push_back(static_cast<int>(rng() % 7));
            docs.push_back(d);
            vis.push_back(vrcmf::testkit::random_matrix(4, 1, rng));
            masks.push_back(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(net.pooled_dim()), e == 1 ? 0.0 : 2.0));
        }
        std::vector<PriorExample> batch;
        for (int e = 0; e < 3; ++e)
            batch.push_back({{docs[e], visual ? &vis[e] : nullptr},
                             vrcmf::testkit::random_matrix(3, 1, rng),
                             toy == 2 ? &masks[e] : nullptr});
        auto g = network_gradient(net, batch, 1.7, 0.3);
        auto checks = vrcmf::testkit::finite_difference_check<PriorNetwork>(
            net, g.gradient, [&](const PriorNetwork& w) { return network_gradient(w, batch, 1.7, 0.3).loss; });
        for (const auto& c : checks) EXPECT_LT(c.relative_error, 1e-4) << to_string(variant) << " " << c.name;
    }
}

INSTANTIATE_TEST_SUITE_P(Variants, NetworkGradientCheck,
                         ::testing::Values(Variant::convmf, Variant::rconvmf, Variant::vconvmf, Variant::vrconvmf));

TEST(NetworkGradient, RegularizerOnlyWhenTargetsMatch) {
    auto net = random_net(Variant::vrconvmf, 3, 6, 4, 5);
    std::vector<int> doc{2, 4};
    Eigen::VectorXd vis = Eigen::VectorXd::Constant(4, 0.5);
    Eigen::VectorXd target = compute_item_prior(net, 3, {doc, &vis});
    std::vector<PriorExample> batch{{{doc, &vis}, target, nullptr}};
    auto g = network_gradient(net, batch, 3.0, 0.25);
    auto expect = net.zeros_like();
    add_scaled(expect, 0.25, net);
    auto got = g.gradient.params();
    auto want = expect.params();
    for (std::size_t t = 0; t < got.size(); ++t)
        for (std::size_t i = 0; i < got[t].values.size(); ++i) ASSERT_NEAR(got[t].values[i], want[t].values[i], 1e-15);
    EXPECT_NEAR(g.loss, 0.125 * squared_norm(net), 1e-12);
}
