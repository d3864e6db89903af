#include <sstream>

#include <gtest/gtest.h>

#include "vrcmf/error.hpp"
#include "vrcmf/vocabulary.hpp"

using namespace vrcmf;

using Docs = std::vector<std::pair<std::string, std::string>>;

TEST(Tokenize, LowercasesAndSplits) {
    auto t = tokenize("The FAST-fox, runs!! 42x");
    ASSERT_EQ(t.size(), 5u);
    EXPECT_EQ(t[0], "the");
    EXPECT_EQ(t[2], "fox");
    EXPECT_EQ(t[4], "42x");
    auto u = tokenize("caf\xc3\xa9 ok");
    EXPECT_EQ(u[0], "caf\xc3\xa9");
}

TEST(Vocabulary, HandCountedExample) {
    Docs docs{{"a", "the fast fox"}, {"b", "fast fox runs"}};
    auto r = build_vocabulary(docs, 2, {"the"});
    ASSERT_EQ(r.vocabulary.size(), 2u);
    EXPECT_EQ(r.vocabulary.words[0], "fast");
    EXPECT_EQ(r.vocabulary.words[1], "fox");
    EXPECT_FALSE(r.vocabulary.find("runs"));
    EXPECT_EQ(r.sequences[1], (TokenSequence{0, 1}));
    EXPECT_EQ(r.vocabulary.pad_index(), 2);
}

TEST(Vocabulary, CapNotBinding) {
    Docs docs{{"a", "x y z the"}};
    auto r = build_vocabulary(docs, 100, {"the"});
    EXPECT_EQ(r.vocabulary.size(), 3u);
    EXPECT_FALSE(r.vocabulary.find("the"));
    // equal counts fall back to lexicographic order
    EXPECT_EQ(r.vocabulary.words[0], "x");
}

TEST(Vocabulary, TruncatesLongDocuments) {
    std::string text;
    for (int i = 0; i < 500; ++i) text += "w" + std::to_string(i % 7) + " ";
    auto r = build_vocabulary({{"a", text}}, 6000, {}, 400);
    EXPECT_EQ(r.sequences[0].size(), 400u);
}

TEST(Vocabulary, FlagsEmptyAndRejectsAllEmpty) {
    auto r = build_vocabulary({{"a", "the"}, {"b", "word"}}, 10, {"the"});
    EXPECT_TRUE(r.empty[0]);
    EXPECT_FALSE(r.empty[1]);
    EXPECT_THROW(build_vocabulary({{"a", "the"}}, 10, {"the"}), Error);
    EXPECT_THROW(build_vocabulary({{"a", "x"}}, 0, {}), Error);
    EXPECT_THROW(build_vocabulary({}, 10, {}), Error);
}

TEST(Vocabulary, EncodeMatchesBuild) {
    Docs docs{{"a", "b a a c the"}, {"b", "c c"}};
    auto r = build_vocabulary(docs, 2, {"the"});
    EXPECT_EQ(encode_document(r.vocabulary, docs[0].second, {"the"}), r.sequences[0]);
}

TEST(Vocabulary, SaveLoadRoundTrip) {
    auto r = build_vocabulary({{"a", "alpha beta beta gamma"}}, 10, {}, 123);
    std::stringstream buf;
    save_vocabulary(buf, r.vocabulary);
    auto back = load_vocabulary(buf, "buf");
    EXPECT_EQ(back.words, r.vocabulary.words);
    EXPECT_EQ(back.max_doc_length, 123u);
    EXPECT_EQ(*back.find("beta"), 0);
    std::istringstream junk("nope\n");
    EXPECT_THROW(load_vocabulary(junk, "junk"), ParseError);
}

TEST(Documents, ReadFormatAndErrors) {
    std::istringstream in("10\tA movie about space\r\n\n11\tAnother one\n");
    auto docs = read_documents(in, "docs");
    ASSERT_EQ(docs.size(), 2u);
    EXPECT_EQ(docs[0].first, "10");
    EXPECT_EQ(docs[1].second, "Another one");
    std::istringstream dup("1\ta\n1\tb\n");
    EXPECT_THROW(read_documents(dup, "docs"), ParseError);
    std::istringstream notab("1 a\n");
    EXPECT_THROW(read_documents(notab, "docs"), ParseError);
    std::istringstream stop(" the \n\nA\n");
    auto s = read_stopwords(stop);
    EXPECT_TRUE(s.count("the"));
}
