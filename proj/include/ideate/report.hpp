#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ideate/agreement.hpp"
#include "ideate/corpus.hpp"
#include "ideate/lpa.hpp"

namespace ideate::report {

// ---------------------------------------------------------------------------
// Bundle
// ---------------------------------------------------------------------------

struct Metadata {
    std::string tool_version;
    std::string ideas_digest;
    std::string ratings_digest;
    std::string rubric_digest;  // empty when the run had no rubric input
    std::string generated_at;   // ISO-8601 UTC
};

struct DistributionRow {
    corpus::RaterGroup group = corpus::RaterGroup::Expert;
    corpus::Criterion criterion = corpus::Criterion::Relevance;
    agreement::Distribution distribution;
};

struct KappaRow {
    corpus::Criterion criterion = corpus::Criterion::Relevance;
    corpus::RaterGroup group = corpus::RaterGroup::Expert;
    agreement::KappaResult result;
};

struct CorrelationRow {
    corpus::RaterGroup group_a = corpus::RaterGroup::Expert;
    corpus::RaterGroup group_b = corpus::RaterGroup::Machine;
    agreement::CorrelationResult result;
};

struct RankingRow {
    corpus::RaterGroup group = corpus::RaterGroup::Expert;
    agreement::RankedList ranking;
};

struct OverlapRow {
    corpus::RaterGroup group_a = corpus::RaterGroup::Expert;
    corpus::RaterGroup group_b = corpus::RaterGroup::Machine;
    std::size_t k = 4;
    agreement::OverlapResult result;
};

/// Everything the report renders. Empty sections (empty vectors, empty
/// optionals) are omitted from both the Markdown and the CSV exports.
struct ReportBundle {
    corpus::TeamSourceCounts counts;
    std::vector<std::pair<std::string, corpus::WordStats>> word_stats; // label -> stats
    std::optional<corpus::SelfRatingSummary> self_ratings;
    std::vector<DistributionRow> distributions;
    std::vector<KappaRow> kappa_table;
    std::vector<CorrelationRow> correlations;
    std::vector<RankingRow> rankings;
    std::vector<OverlapRow> overlaps;
    std::vector<lpa::LpaSignature> signatures;
    std::optional<agreement::ChosenComparison> chosen_comparison;
    Metadata metadata;
};

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

/// Deterministic Markdown document with fixed section order and fixed
/// precisions: means/stds at 2 decimals, kappa/P/r at 3, aggregate totals
/// at 3, LPA weights at 6.
std::string render_markdown(const ReportBundle& bundle);

/// One CSV per populated section (the overlap section adds a positions
/// file), plus metadata.csv; numbers carry the same formatting as the
/// Markdown. Returns the written paths.
std::vector<std::string> export_csv(const ReportBundle& bundle, const std::string& out_dir);

/// ISO-8601 UTC timestamp. Honors the SOURCE_DATE_EPOCH environment
/// variable so pipelines can pin report metadata for byte-identical output.
std::string current_timestamp();

// Shared fixed-precision formatters (also used by the CLI's agree outputs).
std::string fmt2(double value);
std::string fmt3(double value);
std::string fmt6(double value);

} // namespace ideate::report
