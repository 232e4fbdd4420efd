#include "wordgroup/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wordgroup {
namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one code point starting at text[pos]. Returns kInvalid for a
// malformed, overlong or surrogate sequence; `len` is set to the number of
// bytes consumed either way (at least 1).
char32_t decode_utf8(std::string_view text, std::size_t pos, std::size_t& len) {
  const auto b0 = static_cast<unsigned char>(text[pos]);
  len = 1;
  if (b0 < 0x80) return b0;

  std::size_t need = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    need = 1, cp = b0 & 0x1F, min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    need = 2, cp = b0 & 0x0F, min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    need = 3, cp = b0 & 0x07, min = 0x10000;
  } else {
    return kInvalid;
  }
  for (std::size_t k = 1; k <= need; ++k) {
    if (pos + k >= text.size()) return kInvalid;
    const auto b = static_cast<unsigned char>(text[pos + k]);
    if ((b & 0xC0) != 0x80) return kInvalid;
    cp = (cp << 6) | (b & 0x3F);
    len = k + 1;
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return kInvalid;
  return cp;
}

void encode_utf8(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

enum class CharClass { kSeparator, kWord, kApostrophe };

CharClass classify(char32_t cp) {
  if (cp < 0x80) {
    if (cp == '\'') return CharClass::kApostrophe;
    const bool alnum = (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
                       (cp >= '0' && cp <= '9');
    return alnum ? CharClass::kWord : CharClass::kSeparator;
  }
  if (cp == 0x2019) return CharClass::kApostrophe;
  if (cp < 0xC0) {
    return (cp == 0xAA || cp == 0xB5 || cp == 0xBA) ? CharClass::kWord
                                                     : CharClass::kSeparator;
  }
  if (cp == 0xD7 || cp == 0xF7) return CharClass::kSeparator;
  // Punctuation and symbol blocks outside Latin-1.
  if ((cp >= 0x2000 && cp <= 0x2BFF) || (cp >= 0x2E00 && cp <= 0x2E7F) ||
      (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFE30 && cp <= 0xFE4F) ||
      (cp >= 0xFF00 && cp <= 0xFF0F) || (cp >= 0x1F000 && cp <= 0x1FAFF)) {
    return CharClass::kSeparator;
  }
  return CharClass::kWord;
}

// Lowercasing covers ASCII, Latin-1 and Latin Extended-A; other scripts are
// kept as written.
char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp == 0x178) return 0xFF;
  if ((cp >= 0x100 && cp <= 0x137) || (cp >= 0x14A && cp <= 0x177)) {
    return (cp % 2 == 0) ? cp + 1 : cp;
  }
  if ((cp >= 0x139 && cp <= 0x148) || (cp >= 0x179 && cp <= 0x17E)) {
    return (cp % 2 == 1) ? cp + 1 : cp;
  }
  return cp;
}

void flush(std::string& run, TokenStream& out) {
  const auto first = run.find_first_not_of('\'');
  if (first != std::string::npos) {
    const auto last = run.find_last_not_of('\'');
    out.emplace_back(run.substr(first, last - first + 1));
  }
  run.clear();
}

}  // namespace

TokenStream tokenize(std::string_view text) {
  TokenStream out;
  std::string run;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t len = 1;
    const char32_t cp = decode_utf8(text, pos, len);
    pos += len;
    if (cp == kInvalid) continue;
    switch (classify(cp)) {
      case CharClass::kWord:
        encode_utf8(to_lower(cp), run);
        break;
      case CharClass::kApostrophe:
        run.push_back('\'');
        break;
      case CharClass::kSeparator:
        flush(run, out);
        break;
    }
  }
  flush(run, out);
  return out;
}

TokenStream tokenize(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return tokenize(std::string_view(text));
}

TokenStream tokenize_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return tokenize(in);
}

Vocabulary Vocabulary::from_counts(std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.word < b.word;
  });
  Vocabulary vocab;
  vocab.index_.reserve(entries.size());
  for (std::size_t id = 0; id < entries.size(); ++id) {
    if (entries[id].count == 0) {
      throw std::invalid_argument("vocabulary count must be positive: " + entries[id].word);
    }
    if (!vocab.index_.emplace(entries[id].word, id).second) {
      throw std::invalid_argument("duplicate vocabulary word: " + entries[id].word);
    }
    vocab.total_ += entries[id].count;
  }
  vocab.entries_ = std::move(entries);
  return vocab;
}

std::optional<std::size_t> Vocabulary::find(std::string_view word) const {
  const auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::count(std::string_view word) const {
  const auto id = find(word);
  return id ? entries_[*id].count : 0;
}

void Vocabulary::write_tsv(std::ostream& out) const {
  for (const auto& e : entries_) out << e.word << '\t' << e.count << '\n';
}

Vocabulary Vocabulary::read_tsv(std::istream& in) {
  std::vector<Entry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("vocabulary line " + std::to_string(lineno) + ": missing tab");
    }
    Entry e;
    e.word = line.substr(0, tab);
    try {
      std::size_t used = 0;
      e.count = std::stoull(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::runtime_error("vocabulary line " + std::to_string(lineno) + ": bad count");
    }
    entries.push_back(std::move(e));
  }
  return from_counts(std::move(entries));
}

Vocabulary build_vocabulary(const TokenStream& tokens) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& t : tokens) ++counts[t];
  std::vector<Vocabulary::Entry> entries;
  entries.reserve(counts.size());
  for (auto& [word, n] : counts) entries.push_back({word, n});
  return Vocabulary::from_counts(std::move(entries));
}

WordList select_top(const Vocabulary& vocab, std::size_t n) {
  if (n == 0) throw std::invalid_argument("select_top: n must be at least 1");
  const std::size_t m = std::min(n, vocab.size());
  WordList out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(vocab[i].word);
  return out;
}

}  // namespace wordgroup
