#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ideate::corpus {

// ---------------------------------------------------------------------------
// Domain enums
// ---------------------------------------------------------------------------

enum class IdeaSource { Human, Llm, Collaborative };
enum class RaterGroup { Expert, Novice, Machine };
enum class Criterion { Relevance, Innovation, Insightfulness };

inline constexpr std::array<IdeaSource, 3> kIdeaSources = {
    IdeaSource::Human, IdeaSource::Llm, IdeaSource::Collaborative};
inline constexpr std::array<RaterGroup, 3> kRaterGroups = {
    RaterGroup::Expert, RaterGroup::Novice, RaterGroup::Machine};
inline constexpr std::array<Criterion, 3> kCriteria = {
    Criterion::Relevance, Criterion::Innovation, Criterion::Insightfulness};

std::string_view to_string(IdeaSource source);
std::string_view to_string(RaterGroup group);
std::string_view to_string(Criterion criterion);

/// Parse the lowercase serialized forms; throws SchemaError on anything else.
IdeaSource idea_source_from_string(std::string_view text);
RaterGroup rater_group_from_string(std::string_view text);
Criterion criterion_from_string(std::string_view text);

// ---------------------------------------------------------------------------
// Ideas
// ---------------------------------------------------------------------------

struct Idea {
    std::string id;   // unique within a set
    std::string team;
    IdeaSource source = IdeaSource::Human;
    std::string text;
    bool chosen = false; // final-project selection flag

    bool operator==(const Idea&) const = default;
};

struct IdeaSet {
    std::string problem_statement;
    std::vector<Idea> ideas; // ingestion order preserved

    const Idea* find(std::string_view id) const;
    bool operator==(const IdeaSet&) const = default;
};

/// Load and validate an ideas JSON file. All text is NFC-normalized at
/// ingestion; comparisons downstream are byte-exact.
IdeaSet load_ideas(const std::string& path);

/// Parse the ideas JSON schema from a string (same validation as load_ideas).
IdeaSet parse_ideas_json(std::string_view text);

void save_ideas(const IdeaSet& ideas, const std::string& path);
std::string ideas_to_json(const IdeaSet& ideas);

// ---------------------------------------------------------------------------
// Ratings
// ---------------------------------------------------------------------------

struct RatingRecord {
    std::string idea_id;
    std::string rater_id;
    RaterGroup group = RaterGroup::Expert;
    Criterion criterion = Criterion::Relevance;
    int value = 1;                 // Likert 1..5
    std::optional<int> round;      // present iff group == Machine

    bool operator==(const RatingRecord&) const = default;
};

/// Validated set of rating records indexed by (idea_id, group, criterion).
class RatingTable {
public:
    RatingTable() = default;

    /// Validates values, rounds, uniqueness, and idea references.
    static RatingTable build(std::vector<RatingRecord> records, const IdeaSet& ideas);

    const std::vector<RatingRecord>& records() const { return records_; }
    bool empty() const { return records_.empty(); }
    std::size_t size() const { return records_.size(); }

    /// All rating values for one (idea, group, criterion), in record order.
    std::vector<int> values(std::string_view idea_id, RaterGroup group, Criterion criterion) const;

    /// Matching records for one (idea, group, criterion), in record order.
    std::vector<const RatingRecord*> find(std::string_view idea_id, RaterGroup group,
                                          Criterion criterion) const;

    /// Sorted unique rater ids within a group.
    std::vector<std::string> rater_ids(RaterGroup group) const;

    bool has_group(RaterGroup group) const;

    /// Concatenation keeping both sides' records (used to merge machine
    /// ratings into a human table); revalidates against the idea set.
    static RatingTable merge(const RatingTable& a, const RatingTable& b, const IdeaSet& ideas);

private:
    std::vector<RatingRecord> records_;
    std::map<std::tuple<std::string, int, int>, std::vector<std::size_t>> index_;
};

/// Load the ratings CSV (`idea_id,rater_id,group,criterion,value,round`).
RatingTable load_ratings(const std::string& path, const IdeaSet& ideas);
RatingTable parse_ratings_csv(std::string_view text, const IdeaSet& ideas);

void save_ratings(const RatingTable& table, const std::string& path);
std::string ratings_to_csv(const RatingTable& table);

// ---------------------------------------------------------------------------
// Descriptive statistics
// ---------------------------------------------------------------------------

struct TeamSourceCounts {
    struct Row {
        std::string team;
        long human = 0;
        long llm = 0;
        long collaborative = 0;
        long total() const { return human + llm + collaborative; }
    };
    std::vector<Row> rows; // sorted by team ascending

    long count(std::string_view team, IdeaSource source) const;
    long grand_total() const;
};

/// Idea counts per team and source, with per-team totals.
TeamSourceCounts count_by_team_source(const IdeaSet& ideas);

struct WordStats {
    double mean = 0.0;
    double sample_std = 0.0; // n-1 denominator; 0 when n == 1
    std::size_t n = 0;
};

/// Words are maximal runs of non-whitespace characters.
std::size_t word_count(std::string_view text);

/// Word-count mean/std over ideas, optionally filtered by source.
/// Throws EmptyFilter when no idea matches.
WordStats word_count_stats(const IdeaSet& ideas, std::optional<IdeaSource> source = {});

struct MeanStd {
    double mean = 0.0;
    double sample_std = 0.0;
    std::size_t n = 0;
};

/// Mean/std of raw ratings grouped by (idea source, criterion); the
/// self-rating summary shape. Indexed [source][criterion] in enum order.
struct SelfRatingSummary {
    std::array<std::array<MeanStd, 3>, 3> cells{};

    const MeanStd& at(IdeaSource source, Criterion criterion) const {
        return cells[static_cast<std::size_t>(source)][static_cast<std::size_t>(criterion)];
    }
    MeanStd& at(IdeaSource source, Criterion criterion) {
        return cells[static_cast<std::size_t>(source)][static_cast<std::size_t>(criterion)];
    }
};

SelfRatingSummary summarize_self_ratings(const RatingTable& table, const IdeaSet& ideas);

} // namespace ideate::corpus
