#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ideate/corpus.hpp"

namespace ideate::agreement {

// ---------------------------------------------------------------------------
// Fleiss' Kappa
// ---------------------------------------------------------------------------

/// Complete subject x rater matrix of categorical ratings in 1..5.
struct CategoricalMatrix {
    std::vector<std::string> subjects; // idea ids, ingestion order
    std::vector<std::string> raters;   // sorted unique rater ids
    std::vector<std::vector<int>> cells; // [subject][rater]
};

/// Assemble the matrix for one (group, criterion) slice of a rating table.
/// Throws IncompleteMatrix when any (idea, rater) cell is missing.
CategoricalMatrix build_matrix(const corpus::RatingTable& table, const corpus::IdeaSet& ideas,
                               corpus::RaterGroup group, corpus::Criterion criterion);

struct KappaResult {
    double kappa = 0.0;
    double p_bar = 0.0; // observed agreement
    double p_e = 0.0;   // expected agreement
    std::size_t n_subjects = 0;
    std::size_t n_raters = 0;
};

/// Fleiss' Kappa over the fixed category set {1..5}. Requires >= 2 subjects
/// and >= 2 raters (SampleTooSmall otherwise). Unanimous single-category
/// data (P_e = 1 with P_bar = 1) reports kappa = 1; P_e = 1 with imperfect
/// agreement raises DegenerateAgreement.
KappaResult fleiss_kappa(const CategoricalMatrix& matrix);

// ---------------------------------------------------------------------------
// Aggregate scores and rankings
// ---------------------------------------------------------------------------

struct AggregateScore {
    std::string idea_id;
    std::array<double, 3> per_criterion_mean{}; // indexed by Criterion order
    double total = 0.0;                         // sum of the three means
};

/// Per-idea aggregate for one rater group: the criterion means and their
/// sum. Every idea must carry at least one rating per criterion from the
/// group (MissingCriterion otherwise). Ideas keep ingestion order.
std::vector<AggregateScore> group_means(const corpus::RatingTable& table,
                                        const corpus::IdeaSet& ideas,
                                        corpus::RaterGroup group);

struct RankedList {
    struct Entry {
        std::string idea_id;
        double total = 0.0;
    };
    std::vector<Entry> entries; // total desc, ties idea_id asc; rank = index + 1

    /// 1-based rank of an idea; nullopt when absent.
    std::optional<std::size_t> position(std::string_view idea_id) const;
};

/// Descending by total with deterministic idea-id tie-break.
/// Throws EmptyTable on an empty score list.
RankedList rank(std::span<const AggregateScore> scores);

struct OverlapResult {
    std::size_t top_shared = 0;
    std::size_t bottom_shared = 0;
    /// Every idea in either list's top-k or bottom-k -> its 1-based rank in
    /// (first list, second list).
    std::map<std::string, std::pair<std::size_t, std::size_t>> positions;
};

/// Shared membership of the two lists' top-k and bottom-k slices. The lists
/// must rank the same idea population (PopulationMismatch) and k must lie in
/// [1, n] (ValueOutOfRange).
OverlapResult top_bottom_overlap(const RankedList& a, const RankedList& b, std::size_t k);

// ---------------------------------------------------------------------------
// Correlation, distributions, normality
// ---------------------------------------------------------------------------

struct CorrelationResult {
    double r = 0.0;
    std::size_t n = 0;
};

/// Sample Pearson correlation. Lengths must match and be >= 3
/// (LengthMismatch); both sides need nonzero variance (ZeroVariance).
CorrelationResult pearson(std::span<const double> x, std::span<const double> y);

struct Distribution {
    std::array<std::size_t, 5> bins{}; // bins[v-1] counts group means rounding to v
    std::vector<double> means;         // raw per-idea group means, ingestion order
};

/// Histogram of per-idea group-mean ratings, binned half-up to 1..5. Ideas
/// without ratings from the group on the criterion are skipped; if none
/// remain, EmptyGroup is raised.
Distribution rating_distribution(const corpus::RatingTable& table, const corpus::IdeaSet& ideas,
                                 corpus::RaterGroup group, corpus::Criterion criterion);

struct NormalityResult {
    double w = 0.0;
    double p_value = 0.0;
    std::size_t n = 0;
};

/// Shapiro-Wilk W and approximate p-value (Royston's AS R94 formulation).
/// Supports 3 <= n <= 5000 (SampleTooSmall outside); all-identical samples
/// raise ZeroVariance.
NormalityResult shapiro_wilk(std::span<const double> samples);

// ---------------------------------------------------------------------------
// Chosen-idea comparison
// ---------------------------------------------------------------------------

struct ChosenComparison {
    std::vector<std::string> teams; // sorted ascending
    /// [group][criterion] -> per-team mean/std over raw ratings of the
    /// team's chosen ideas, aligned with `teams`. n = 0 when the group has
    /// no ratings there.
    std::array<std::array<std::vector<corpus::MeanStd>, 3>, 3> chosen;
    /// [group][criterion] -> mean/std over per-idea mean ratings of every
    /// idea in the set (the all-ideas reference column).
    std::array<std::array<corpus::MeanStd, 3>, 3> all_ideas{};
};

/// Ratings of the chosen ideas per team/group/criterion next to the
/// all-ideas averages. Every team needs at least one chosen idea
/// (NoChosenIdeas otherwise).
ChosenComparison chosen_idea_comparison(const corpus::RatingTable& table,
                                        const corpus::IdeaSet& ideas);

} // namespace ideate::agreement
