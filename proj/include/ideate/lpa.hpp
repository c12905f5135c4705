#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ideate/corpus.hpp"

namespace ideate::lpa {

// ---------------------------------------------------------------------------
// Term extraction
// ---------------------------------------------------------------------------

struct TermExtractorConfig {
    bool lowercase = true;               // ASCII case folding
    std::size_t min_token_len = 2;       // in codepoints; tokens shorter are dropped
    std::optional<std::string> stopword_path;     // replaces the built-in list
    std::optional<std::string> keep_lexicon_path; // whitelist filter when present
};

/// Built-in English stopword list used when no stopword file is given.
const std::set<std::string>& default_stopwords();

/// One term per line, UTF-8, '#' starts a comment; blank lines ignored.
/// Throws BadLexiconFile when the file is missing or unreadable.
std::set<std::string> load_term_file(const std::string& path);

/// Rule-based tokenizer: tokens are maximal alphabetic runs (ASCII letters
/// plus non-ASCII codepoints outside common punctuation blocks). Filters by
/// length, stopword list, and optional keep-lexicon, in that order.
class TermExtractor {
public:
    explicit TermExtractor(TermExtractorConfig config = {});

    std::vector<std::string> extract(std::string_view text) const;
    const TermExtractorConfig& config() const { return config_; }

private:
    TermExtractorConfig config_;
    std::set<std::string> stopwords_;
    std::optional<std::set<std::string>> keep_;
};

/// One-shot convenience wrapper around TermExtractor.
std::vector<std::string> extract_terms(std::string_view text, const TermExtractorConfig& config);

// ---------------------------------------------------------------------------
// Frequency vectors
// ---------------------------------------------------------------------------

struct TermVector {
    std::string doc_id;
    std::map<std::string, std::size_t> counts; // no zero-count entries
    std::size_t total = 0;                     // == sum of counts
};

struct FreqVector {
    std::string doc_id;
    std::map<std::string, double> freqs; // support is the key set; sums to 1

    bool same_support(const FreqVector& other) const;
};

/// Term counts over the concatenated idea texts.
/// Throws EmptyVocabulary when no term survives extraction.
TermVector build_term_vector(std::string doc_id, std::span<const corpus::Idea> ideas,
                             const TermExtractor& extractor);

FreqVector normalize(const TermVector& counts);

/// build_term_vector + normalize.
FreqVector build_freq_vector(std::string doc_id, std::span<const corpus::Idea> ideas,
                             const TermExtractor& extractor);

/// Copies of the ideas matching one source tag, ingestion order preserved.
std::vector<corpus::Idea> filter_by_source(const corpus::IdeaSet& ideas,
                                           corpus::IdeaSource source);

/// Element-wise average over the union support (absent terms count as 0).
FreqVector corpus_vector(const FreqVector& vh, const FreqVector& vg);

/// Gives every term of `support` missing from `doc` the value epsilon, then
/// rescales to sum 1. A doc already covering the full support is returned
/// unchanged. Throws SupportMismatch if doc holds a term outside `support`.
FreqVector pad_and_renormalize(const FreqVector& doc, const std::set<std::string>& support,
                               double epsilon);

/// Per-term symmetric KLD contribution (d - c) * log2(d / c). Requires
/// identical supports with strictly positive entries (post-padding);
/// throws SupportMismatch otherwise. Every contribution is >= 0 and the sum
/// equals KLD(doc||corpus) + KLD(corpus||doc).
std::map<std::string, double> sym_kld_contributions(const FreqVector& doc,
                                                    const FreqVector& corpus);

// ---------------------------------------------------------------------------
// Signatures
// ---------------------------------------------------------------------------

struct LpaConfig {
    double epsilon = 1e-6; // padding value for missing corpus terms
    int top_k = 15;        // signature length cap
    // log base is fixed at 2
};

struct SignatureEntry {
    std::string term;
    double weight = 0.0; // per-element symmetric KLD contribution, >= 0
    int sign = 1;        // +1 iff padded doc freq > corpus freq, else -1

    bool operator==(const SignatureEntry&) const = default;
};

struct LpaSignature {
    std::string doc_id;
    std::vector<SignatureEntry> entries; // weight desc, ties term asc; size <= top_k
};

/// Full pipeline: doc and other idea lists -> unpadded freq vectors ->
/// averaged corpus vector -> padded doc -> signed top-k contributions.
/// Terms whose padded doc frequency equals the corpus frequency are never
/// emitted. When epsilon >= half the smallest true frequency seen in either
/// vector, a warning line is appended to *warnings (if given).
LpaSignature signature(std::string doc_id, std::span<const corpus::Idea> doc_ideas,
                       std::span<const corpus::Idea> other_ideas,
                       const TermExtractor& extractor, const LpaConfig& config = {},
                       std::vector<std::string>* warnings = nullptr);

/// CSV `doc_id,term,weight,sign` with weight at 6 decimals.
std::string signatures_to_csv(std::span<const LpaSignature> signatures);
void save_signatures(std::span<const LpaSignature> signatures, const std::string& path);

} // namespace ideate::lpa
