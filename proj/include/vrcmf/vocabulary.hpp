#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace vrcmf {

using TokenSequence = std::vector<int>;

struct Vocabulary {
    std::unordered_map<std::string, int> index;
    std::vector<std::string> words;
    std::size_t max_doc_length = 400;

    std::size_t size() const { return words.size(); }
    /// Index reserved for padding; one past the last word.
    int pad_index() const { return static_cast<int>(words.size()); }
    std::optional<int> find(std::string_view word) const;
};

/// Lowercases ASCII and splits on runs of non-alphanumeric characters.
/// Bytes >= 0x80 count as word characters so UTF-8 words stay intact.
std::vector<std::string> tokenize(std::string_view text);

struct VocabularyResult {
    Vocabulary vocabulary;
    /// One sequence per input document, same order as the input.
    std::vector<TokenSequence> sequences;
    /// True when the document has no in-vocabulary token left.
    std::vector<bool> empty;
};

/// Raw tokens are truncated to `max_len`, stopwords dropped, the `cap` most
/// frequent remaining words kept (ties broken lexicographically), and every
/// document re-expressed over that vocabulary.
VocabularyResult build_vocabulary(const std::vector<std::pair<std::string, std::string>>& docs,
                                  std::size_t cap, const std::set<std::string>& stopwords,
                                  std::size_t max_len = 400);

/// Re-expresses a raw document over an existing vocabulary.
TokenSequence encode_document(const Vocabulary& vocab, std::string_view text,
                              const std::set<std::string>& stopwords);

/// `item_id<TAB>text` per line. Duplicate ids are an error.
std::vector<std::pair<std::string, std::string>> read_documents(std::istream& in,
                                                                const std::string& source);
std::vector<std::pair<std::string, std::string>> read_documents(const std::string& path);

/// One word per line; blank lines and surrounding whitespace ignored.
std::set<std::string> read_stopwords(std::istream& in);
std::set<std::string> read_stopwords(const std::string& path);

void save_vocabulary(std::ostream& out, const Vocabulary& vocab);
Vocabulary load_vocabulary(std::istream& in, const std::string& source = "<vocabulary>");

}  // namespace vrcmf
