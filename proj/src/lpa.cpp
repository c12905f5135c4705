#include "ideate/lpa.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ideate/errors.hpp"
#include "ideate/unicode.hpp"

namespace ideate::lpa {

namespace {

// Common punctuation/symbol blocks that must break tokens even though they
// sit above ASCII: Latin-1 punctuation, general punctuation, and the two
// arithmetic signs embedded in the Latin-1 letter range.
bool is_word_codepoint(char32_t cp) {
    if (cp < 0x80) return std::isalpha(static_cast<unsigned char>(cp)) != 0;
    if (cp >= 0xA0 && cp <= 0xBF) return false;
    if (cp == 0xD7 || cp == 0xF7) return false;
    if (cp >= 0x2000 && cp <= 0x206F) return false;
    return true;
}

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return std::string(text.substr(begin, end - begin));
}

std::string ascii_lower(std::string text) {
    for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return text;
}

std::string format_weight(double weight) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", weight);
    return buf;
}

} // namespace

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> kStopwords = {
        "a",       "about",      "above",   "after",   "again",    "against", "all",
        "am",      "an",         "and",     "any",     "are",      "as",      "at",
        "be",      "because",    "been",    "before",  "being",    "below",   "between",
        "both",    "but",        "by",      "can",     "could",    "did",     "do",
        "does",    "doing",      "down",    "during",  "each",     "few",     "for",
        "from",    "further",    "had",     "has",     "have",     "having",  "he",
        "her",     "here",       "hers",    "herself", "him",      "himself", "his",
        "how",     "i",          "if",      "in",      "into",     "is",      "it",
        "its",     "itself",     "just",    "me",      "more",     "most",    "my",
        "myself",  "no",         "nor",     "not",     "now",      "of",      "off",
        "on",      "once",       "only",    "or",      "other",    "our",     "ours",
        "out",     "over",       "own",     "same",    "she",      "should",  "so",
        "some",    "such",       "than",    "that",    "the",      "their",   "theirs",
        "them",    "themselves", "then",    "there",   "these",    "they",    "this",
        "those",   "through",    "to",      "too",     "under",    "until",   "up",
        "very",    "was",        "we",      "were",    "what",     "when",    "where",
        "which",   "while",      "who",     "whom",    "why",      "will",    "with",
        "would",   "you",        "your",    "yours",   "yourself", "yourselves"};
    return kStopwords;
}

std::set<std::string> load_term_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::BadLexiconFile, "cannot open " + path);
    std::set<std::string> terms;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string term = trim(line);
        if (!term.empty()) terms.insert(unicode::nfc(term));
    }
    if (in.bad()) raise(ErrorCode::BadLexiconFile, "read failed for " + path);
    return terms;
}

TermExtractor::TermExtractor(TermExtractorConfig config) : config_(std::move(config)) {
    if (config_.min_token_len < 1) config_.min_token_len = 1;
    std::set<std::string> stopwords =
        config_.stopword_path ? load_term_file(*config_.stopword_path) : default_stopwords();
    if (config_.keep_lexicon_path) {
        std::set<std::string> keep = load_term_file(*config_.keep_lexicon_path);
        keep_.emplace();
        for (const std::string& term : keep)
            keep_->insert(config_.lowercase ? ascii_lower(term) : term);
    }
    for (const std::string& term : stopwords)
        stopwords_.insert(config_.lowercase ? ascii_lower(term) : term);
}

std::vector<std::string> TermExtractor::extract(std::string_view text) const {
    std::vector<std::string> terms;
    std::u32string codepoints = unicode::decode_utf8(text);
    std::u32string token;
    auto flush = [&] {
        if (token.size() >= config_.min_token_len) {
            std::string term = unicode::encode_utf8(token);
            if (config_.lowercase) term = ascii_lower(std::move(term));
            if (!stopwords_.contains(term) && (!keep_ || keep_->contains(term)))
                terms.push_back(std::move(term));
        }
        token.clear();
    };
    for (char32_t cp : codepoints) {
        if (is_word_codepoint(cp)) {
            token.push_back(cp);
        } else {
            flush();
        }
    }
    flush();
    return terms;
}

std::vector<std::string> extract_terms(std::string_view text, const TermExtractorConfig& config) {
    return TermExtractor(config).extract(text);
}

// ---------------------------------------------------------------------------
// Frequency vectors
// ---------------------------------------------------------------------------

bool FreqVector::same_support(const FreqVector& other) const {
    if (freqs.size() != other.freqs.size()) return false;
    auto a = freqs.begin();
    auto b = other.freqs.begin();
    for (; a != freqs.end(); ++a, ++b) {
        if (a->first != b->first) return false;
    }
    return true;
}

TermVector build_term_vector(std::string doc_id, std::span<const corpus::Idea> ideas,
                             const TermExtractor& extractor) {
    TermVector vec;
    vec.doc_id = std::move(doc_id);
    for (const corpus::Idea& idea : ideas) {
        for (std::string& term : extractor.extract(idea.text)) {
            ++vec.counts[std::move(term)];
            ++vec.total;
        }
    }
    if (vec.total == 0)
        raise(ErrorCode::EmptyVocabulary, "no terms survive extraction for \"" + vec.doc_id + "\"");
    return vec;
}

FreqVector normalize(const TermVector& counts) {
    FreqVector vec;
    vec.doc_id = counts.doc_id;
    const double total = static_cast<double>(counts.total);
    for (const auto& [term, count] : counts.counts)
        vec.freqs[term] = static_cast<double>(count) / total;
    return vec;
}

FreqVector build_freq_vector(std::string doc_id, std::span<const corpus::Idea> ideas,
                             const TermExtractor& extractor) {
    return normalize(build_term_vector(std::move(doc_id), ideas, extractor));
}

std::vector<corpus::Idea> filter_by_source(const corpus::IdeaSet& ideas,
                                           corpus::IdeaSource source) {
    std::vector<corpus::Idea> out;
    for (const corpus::Idea& idea : ideas.ideas) {
        if (idea.source == source) out.push_back(idea);
    }
    return out;
}

FreqVector corpus_vector(const FreqVector& vh, const FreqVector& vg) {
    FreqVector out;
    out.doc_id = vh.doc_id + "+" + vg.doc_id;
    for (const auto& [term, freq] : vh.freqs) out.freqs[term] += freq / 2.0;
    for (const auto& [term, freq] : vg.freqs) out.freqs[term] += freq / 2.0;
    return out;
}

FreqVector pad_and_renormalize(const FreqVector& doc, const std::set<std::string>& support,
                               double epsilon) {
    for (const auto& [term, _] : doc.freqs) {
        if (!support.contains(term))
            raise(ErrorCode::SupportMismatch,
                  "document term \"" + term + "\" missing from the padding support");
    }
    if (doc.freqs.size() == support.size()) return doc; // full support already

    FreqVector out;
    out.doc_id = doc.doc_id;
    double sum = 0.0;
    for (const std::string& term : support) {
        auto it = doc.freqs.find(term);
        double value = it != doc.freqs.end() ? it->second : epsilon;
        out.freqs[term] = value;
        sum += value;
    }
    for (auto& [_, value] : out.freqs) value /= sum;
    return out;
}

std::map<std::string, double> sym_kld_contributions(const FreqVector& doc,
                                                    const FreqVector& corpus) {
    if (!doc.same_support(corpus))
        raise(ErrorCode::SupportMismatch, "document and corpus vectors differ in support");
    std::map<std::string, double> contributions;
    auto d = doc.freqs.begin();
    auto c = corpus.freqs.begin();
    for (; d != doc.freqs.end(); ++d, ++c)
        contributions[d->first] = (d->second - c->second) * std::log2(d->second / c->second);
    return contributions;
}

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

LpaSignature signature(std::string doc_id, std::span<const corpus::Idea> doc_ideas,
                       std::span<const corpus::Idea> other_ideas,
                       const TermExtractor& extractor, const LpaConfig& config,
                       std::vector<std::string>* warnings) {
    FreqVector doc = build_freq_vector(doc_id, doc_ideas, extractor);
    FreqVector other = build_freq_vector(doc_id + "-counterpart", other_ideas, extractor);
    FreqVector corpus = corpus_vector(doc, other);

    if (warnings != nullptr) {
        double smallest = 1.0;
        for (const auto& [_, f] : doc.freqs) smallest = std::min(smallest, f);
        for (const auto& [_, f] : corpus.freqs) smallest = std::min(smallest, f);
        if (config.epsilon >= smallest / 2.0) {
            std::ostringstream msg;
            msg << "epsilon " << config.epsilon << " is not small against the smallest true "
                << "frequency " << smallest << " for \"" << doc_id
                << "\"; padding will dominate the signature";
            warnings->push_back(msg.str());
        }
    }

    std::set<std::string> support;
    for (const auto& [term, _] : corpus.freqs) support.insert(term);
    FreqVector padded = pad_and_renormalize(doc, support, config.epsilon);
    std::map<std::string, double> contributions = sym_kld_contributions(padded, corpus);

    LpaSignature sig;
    sig.doc_id = std::move(doc_id);
    for (const auto& [term, weight] : contributions) {
        double d = padded.freqs.at(term);
        double c = corpus.freqs.at(term);
        if (d == c) continue; // zero contribution, no defined sign
        sig.entries.push_back({term, weight, d > c ? 1 : -1});
    }
    std::stable_sort(sig.entries.begin(), sig.entries.end(),
                     [](const SignatureEntry& a, const SignatureEntry& b) {
                         if (a.weight != b.weight) return a.weight > b.weight;
                         return a.term < b.term;
                     });
    if (config.top_k >= 0 && sig.entries.size() > static_cast<std::size_t>(config.top_k))
        sig.entries.resize(static_cast<std::size_t>(config.top_k));
    return sig;
}

std::string signatures_to_csv(std::span<const LpaSignature> signatures) {
    std::string out = "doc_id,term,weight,sign\n";
    for (const LpaSignature& sig : signatures) {
        for (const SignatureEntry& entry : sig.entries) {
            out += sig.doc_id;
            out += ',';
            out += entry.term;
            out += ',';
            out += format_weight(entry.weight);
            out += ',';
            out += entry.sign > 0 ? "1" : "-1";
            out += '\n';
        }
    }
    return out;
}

void save_signatures(std::span<const LpaSignature> signatures, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorCode::IoError, "cannot write " + path);
    std::string csv = signatures_to_csv(signatures);
    out.write(csv.data(), static_cast<std::streamsize>(csv.size()));
    if (!out) raise(ErrorCode::IoError, "write failed for " + path);
}

} // namespace ideate::lpa
