#include "vrcmf/vocabulary.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "vrcmf/binary_io.hpp"
#include "vrcmf/error.hpp"
#include "vrcmf/format.hpp"

namespace vrcmf {

namespace {

constexpr std::string_view kVocabMagic = "vrcmf-vocab";
constexpr int kVocabVersion = 1;

bool is_word_char(unsigned char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

}  // namespace

std::optional<int> Vocabulary::find(std::string_view word) const {
    auto it = index.find(std::string(word));
    if (it == index.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (is_word_char(c)) {
            current.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

VocabularyResult build_vocabulary(const std::vector<std::pair<std::string, std::string>>& docs,
                                  std::size_t cap, const std::set<std::string>& stopwords,
                                  std::size_t max_len) {
    if (cap < 1) throw Error("vocabulary cap must be >= 1");
    if (docs.empty()) throw Error("no documents");

    std::vector<std::vector<std::string>> kept(docs.size());
    std::unordered_map<std::string, std::size_t> freq;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        auto tokens = tokenize(docs[d].second);
        if (tokens.size() > max_len) tokens.resize(max_len);
        for (auto& t : tokens) {
            if (stopwords.count(t)) continue;
            ++freq[t];
            kept[d].push_back(std::move(t));
        }
    }
    if (freq.empty()) throw Error("all documents are empty after preprocessing");

    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > cap) ranked.resize(cap);

    VocabularyResult result;
    result.vocabulary.max_doc_length = max_len;
    for (auto& [word, count] : ranked) {
        result.vocabulary.index.emplace(word, static_cast<int>(result.vocabulary.words.size()));
        result.vocabulary.words.push_back(word);
    }
    result.sequences.resize(docs.size());
    result.empty.resize(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& t : kept[d]) {
            auto idx = result.vocabulary.find(t);
            if (idx) result.sequences[d].push_back(*idx);
        }
        result.empty[d] = result.sequences[d].empty();
    }
    return result;
}

TokenSequence encode_document(const Vocabulary& vocab, std::string_view text,
                              const std::set<std::string>& stopwords) {
    auto tokens = tokenize(text);
    if (tokens.size() > vocab.max_doc_length) tokens.resize(vocab.max_doc_length);
    TokenSequence seq;
    for (const auto& t : tokens) {
        if (stopwords.count(t)) continue;
        if (auto idx = vocab.find(t)) seq.push_back(*idx);
    }
    return seq;
}

std::vector<std::pair<std::string, std::string>> read_documents(std::istream& in,
                                                                const std::string& source) {
    std::vector<std::pair<std::string, std::string>> docs;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError(source, line_no, "expected item_id<TAB>text");
        std::string id(trim(std::string_view(line).substr(0, tab)));
        if (id.empty()) throw ParseError(source, line_no, "empty item id");
        if (!seen.insert(id).second) throw ParseError(source, line_no, "duplicate document for item '" + id + "'");
        docs.emplace_back(std::move(id), line.substr(tab + 1));
    }
    return docs;
}

std::vector<std::pair<std::string, std::string>> read_documents(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open documents file '" + path + "'");
    return read_documents(in, path);
}

std::set<std::string> read_stopwords(std::istream& in) {
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto w = trim(line);
        if (w.empty()) continue;
        for (auto& t : tokenize(w)) words.insert(t);
    }
    return words;
}

std::set<std::string> read_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open stopword file '" + path + "'");
    return read_stopwords(in);
}

void save_vocabulary(std::ostream& out, const Vocabulary& vocab) {
    out << kVocabMagic << ' ' << kVocabVersion << ' ' << vocab.size() << ' ' << vocab.max_doc_length
        << '\n';
    BinaryWriter w(out);
    for (const auto& word : vocab.words) w.write_string(word);
}

Vocabulary load_vocabulary(std::istream& in, const std::string& source) {
    std::string header;
    if (!std::getline(in, header)) throw ParseError(source + ": missing header");
    auto parts = split(header, " ");
    if (parts.size() != 4 || parts[0] != kVocabMagic) throw ParseError(source + ": not a vocabulary file");
    if (parse_int(parts[1]) != kVocabVersion) throw ParseError(source + ": unsupported vocabulary version");
    auto count = parse_int(parts[2]);
    auto max_len = parse_int(parts[3]);
    if (!count || !max_len || *count < 0 || *max_len < 0) throw ParseError(source + ": bad header");

    Vocabulary vocab;
    vocab.max_doc_length = static_cast<std::size_t>(*max_len);
    BinaryReader r(in, source);
    for (std::int64_t i = 0; i < *count; ++i) {
        auto word = r.read_string();
        vocab.index.emplace(word, static_cast<int>(i));
        vocab.words.push_back(std::move(word));
    }
    return vocab;
}

}  // namespace vrcmf
