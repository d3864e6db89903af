#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "vrcmf/cli.hpp"
#include "vrcmf/model_io.hpp"

namespace fs = std::filesystem;
using namespace vrcmf;

namespace {

struct Result {
    int code = 0;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("vrcmf_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return {std::istreambuf_iterator<char>(in), {}};
    }

    // 30 users x 20 items, rank-2 structure, every user and item covered.
    std::string synthetic_ratings() const {
        std::mt19937_64 rng(5);
        std::ostringstream s;
        for (int u = 0; u < 30; ++u)
            for (int i = 0; i < 20; ++i)
                if ((u + i) % 3 == 0 || rng() % 4 == 0)
                    s << "u" << u << "::i" << i << "::" << 1 + (u % 5 + i % 3) % 5 << "::" << u * 100 + i << '\n';
        return write("ratings.dat", s.str());
    }

    std::string documents() const {
        const char* words[] = {"space", "love", "war", "robot", "city", "night", "ship", "song"};
        std::ostringstream s;
        for (int i = 0; i < 20; ++i)
            s << "i" << i << '\t' << words[i % 8] << ' ' << words[(i * 3) % 8] << ' ' << words[(i + 5) % 8]
              << " story\n";
        return write("docs.tsv", s.str());
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, StatsOnToyFile) {
    auto f = write("toy.dat", "1::10::5::1\n1::20::3::2\n2::10::4::3\n2::30::1::4\n");
    auto r = run({"stats", "--ratings", f});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("m=2\n"), std::string::npos);
    EXPECT_NE(r.out.find("n=3\n"), std::string::npos);
    EXPECT_NE(r.out.find("sparsity_percent=33.33%"), std::string::npos);
}

TEST_F(CliTest, UsageAndRuntimeErrors) {
    auto r = run({"frobnicate"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("unknown subcommand 'frobnicate'"), std::string::npos);
    EXPECT_EQ(run({"stats"}).code, 2);
    EXPECT_EQ(run({"train", "--ratings", "x"}).code, 2);
    auto missing = run({"stats", "--ratings", path("absent.dat")});
    EXPECT_EQ(missing.code, 1);
    EXPECT_EQ(missing.err.rfind("error: ", 0), 0u);
    auto bad = write("bad.dat", "1::10::5::1\n1::20::9::2\n");
    EXPECT_EQ(run({"stats", "--ratings", bad}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, TrainIsReproducible) {
    auto ratings = synthetic_ratings();
    auto docs = documents();
    auto args = [&](const std::string& out) {
        return std::vector<std::string>{"train", "--ratings", ratings, "--documents", docs, "--variant", "ConvMF",
                                        "-k", "3", "--iterations", "3", "--repeats", "2", "--embed-dim", "4",
                                        "--set", "cnn_maps=3", "--set", "projection_hidden=4", "--seed", "17",
                                        "--out", path(out)};
    };
    auto a = run(args("a"));
    ASSERT_EQ(a.code, 0) << a.err;
    auto b = run(args("b"));
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(a.out, b.out);
    for (std::string f : {"summary.csv", "run-1/model.bin", "run-1/train_log.csv", "run-2/model.bin",
                          "run-2/test.tsv"}) {
        ASSERT_TRUE(fs::exists(path("a/" + f))) << f;
        EXPECT_EQ(slurp(path("a/" + f)), slurp(path("b/" + f))) << f;
    }
    EXPECT_NE(slurp(path("a/run-1/model.bin")), slurp(path("a/run-2/model.bin")));
    EXPECT_EQ(slurp(path("a/summary.csv")).rfind("run,seed,best_iter,val_rmse,test_rmse\n", 0), 0u);
    EXPECT_EQ(slurp(path("a/run-1/train_log.csv")).rfind("iter,loss,train_rmse,val_rmse\n", 0), 0u);

    auto eval = run({"evaluate", path("a"), "--user-cf", "5", "--global-mean"});
    ASSERT_EQ(eval.code, 0) << eval.err;
    EXPECT_NE(eval.out.find("ConvMF"), std::string::npos);
    EXPECT_NE(eval.out.find("UserCF"), std::string::npos);
    EXPECT_NE(eval.out.find("improved vs GlobalMean"), std::string::npos);
}

TEST_F(CliTest, EvaluatePerfectModelIsZero) {
    ModelArtifact m;
    m.config.k = 1;
    m.config.variant = Variant::pmf;
    for (auto id : {"a", "b"}) m.users.add(id);
    for (auto id : {"x", "y"}) m.items.add(id);
    m.factors.users = Eigen::MatrixXd(1, 2);
    m.factors.users << 1, 2;
    m.factors.items = Eigen::MatrixXd(1, 2);
    m.factors.items << 2, 1.5;
    m.network.variant = Variant::pmf;
    save_model(path("model.bin"), m);
    auto test = write("test.tsv", "a\tx\t2\t0\nb\ty\t3\t0\nb\tx\t4\t0\n");
    auto r = run({"evaluate", path("model.bin"), "--test", test});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("PMF    1     0.0000  n/a"), std::string::npos) << r.out;

    auto queries = write("q.tsv", "b\ty\na\ty\n");
    auto p = run({"predict", "--model", path("model.bin"), "--input", queries});
    ASSERT_EQ(p.code, 0) << p.err;
    EXPECT_EQ(p.out, "b\ty\t3.000000\na\ty\t1.500000\n");
    auto unknown = write("u.tsv", "zed\tx\n");
    auto bad = run({"predict", "--model", path("model.bin"), "--input", unknown});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("'zed'"), std::string::npos);
}

TEST_F(CliTest, PrepTextWritesVocabulary) {
    auto docs = documents();
    auto r = run({"prep-text", "--documents", docs, "--out", path("prep"), "--glove", "--embed-dim", "3",
                  "--epochs", "5", "--window", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("documents=20\n"), std::string::npos);
    EXPECT_TRUE(fs::exists(path("prep/vocab.bin")));
    EXPECT_TRUE(fs::exists(path("prep/embeddings.bin")));
    EXPECT_TRUE(fs::exists(path("prep/glove_loss.csv")));
}
