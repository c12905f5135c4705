#pragma once

#include <array>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ideate/corpus.hpp"

namespace ideate::judge {

using corpus::Criterion;

// ---------------------------------------------------------------------------
// Rubric
// ---------------------------------------------------------------------------

struct CriterionRubric {
    std::string definition;
    std::array<std::string, 5> anchors; // anchors[v-1] describes Likert value v

    bool operator==(const CriterionRubric&) const = default;
};

struct Rubric {
    std::array<CriterionRubric, 3> criteria; // indexed in Criterion order

    const CriterionRubric& at(Criterion criterion) const {
        return criteria[static_cast<std::size_t>(criterion)];
    }
    CriterionRubric& at(Criterion criterion) {
        return criteria[static_cast<std::size_t>(criterion)];
    }
    bool operator==(const Rubric&) const = default;
};

/// Built-in rubric: criterion definitions plus authored anchor texts for
/// every scale value. Fully replaceable via a rubric file.
Rubric default_rubric();

/// Rubric file: JSON {criterion: {definition, anchors: {"1".."5"}}}.
/// Every definition and all five anchors must be present and non-empty.
Rubric load_rubric(const std::string& path);
Rubric parse_rubric_json(std::string_view text);
std::string rubric_to_json(const Rubric& rubric);
void save_rubric(const Rubric& rubric, const std::string& path);

/// Content hashes stamped into run results and reports.
std::string rubric_digest(const Rubric& rubric);
std::string ideas_digest(const corpus::IdeaSet& ideas);

// ---------------------------------------------------------------------------
// Prompts and response parsing
// ---------------------------------------------------------------------------

struct PromptParts {
    std::string system; // role preamble
    std::string user;   // problem statement, rubric, idea, output instruction

    std::string full() const { return system + "\n\n" + user; }
};

/// Assemble the evaluation prompt: role preamble, problem statement, the
/// three criterion definitions, all fifteen anchors, the idea text, and the
/// one-line output instruction, in that order. Interpolated text has the
/// '|' delimiter escaped as '\|'.
PromptParts build_prompt_parts(const std::string& problem_statement, const Rubric& rubric,
                               const corpus::Idea& idea);
std::string build_prompt(const std::string& problem_statement, const Rubric& rubric,
                         const corpus::Idea& idea);

struct ParsedRating {
    int relevance = 0;
    int innovation = 0;
    int insightfulness = 0;
    std::string justification;

    bool operator==(const ParsedRating&) const = default;
};

/// Scan the reply for the first line matching
/// `R=<int>|I=<int>|S=<int>|J=<text>`; surrounding prose is ignored.
/// Throws ParseError when no line matches, ValueOutOfRange when a matched
/// integer falls outside [1,5].
ParsedRating parse_response(std::string_view text);

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

struct ProviderConfig {
    std::string endpoint_url; // "mock:<script.json>" selects the scripted provider
    std::string model_id;
    std::string api_key_env = "IDEATE_API_KEY";
    std::chrono::seconds timeout{60};
    int max_retries_per_request = 2; // retries after the first attempt
    int max_parallel = 4;
    double temperature = 0.0;
};

struct ProviderCall {
    int round_index = 1; // 1-based
    std::string idea_id;
    std::string system_prompt;
    std::string user_prompt;
};

/// A rating backend. complete() returns the raw reply text for one idea and
/// must be safe to call from concurrent threads; transport problems raise
/// Error(ProviderError).
class RatingProvider {
public:
    virtual ~RatingProvider() = default;
    virtual std::string complete(const ProviderCall& call) = 0;
};

/// Chat-completion HTTP client: POST {model, temperature, messages:[system,
/// user]} to the endpoint; reads choices[0].message.content. The API key
/// comes from the environment variable named by api_key_env.
class HttpProvider : public RatingProvider {
public:
    explicit HttpProvider(ProviderConfig config);
    std::string complete(const ProviderCall& call) override;

private:
    ProviderConfig config_;
    std::string scheme_host_;
    std::string path_;
    std::string api_key_;
};

/// Deterministic scripted provider for offline runs and tests, driven by a
/// JSON script file:
///   {
///     "default": {"relevance": 3, "innovation": 3, "insightfulness": 3,
///                 "justification": "..."},
///     "scores": {"<idea_id>": {same shape}},          // per-idea overrides
///     "fail_rounds": [17],        // reply unparsably for the whole round
///     "flaky": {"<idea_id>": 1},  // first N attempts per round fail transport
///     "jitter": 1,                // deterministic per-round score wobble
///     "preamble": "..."           // prose prepended to every reply
///   }
class MockProvider : public RatingProvider {
public:
    explicit MockProvider(const std::string& script_path);
    std::string complete(const ProviderCall& call) override;

private:
    struct ScriptedScore {
        int relevance = 3;
        int innovation = 3;
        int insightfulness = 3;
        std::string justification = "scripted rating";
    };

    ScriptedScore score_for(const ProviderCall& call) const;

    ScriptedScore default_score_;
    std::map<std::string, ScriptedScore> scores_;
    std::set<int> fail_rounds_;
    std::map<std::string, int> flaky_;
    int jitter_ = 0;
    std::string preamble_;

    std::mutex mutex_;
    std::map<std::pair<int, std::string>, int> attempts_;
};

/// Dispatch on the endpoint scheme: "mock:<path>" builds a MockProvider,
/// anything else an HttpProvider. Empty endpoints raise ProviderUnconfigured.
std::unique_ptr<RatingProvider> make_provider(const ProviderConfig& config);

// ---------------------------------------------------------------------------
// Evaluation rounds
// ---------------------------------------------------------------------------

struct IdeaScore {
    std::string idea_id;
    std::array<int, 3> values{}; // Criterion order: R, I, S
    std::string justification;
};

struct RoundResult {
    int round_index = 1; // 1-based
    bool succeeded = false;
    std::string failure_reason;   // set iff !succeeded
    std::vector<IdeaScore> scores; // idea-set order; covers every idea iff succeeded
};

struct JudgeRunResult {
    std::vector<RoundResult> rounds; // ordered by round_index; failures kept
    int requested_rounds = 0;
    std::string ideas_digest;
    std::string rubric_digest;
};

/// One fresh-context evaluation pass over all ideas: an independent request
/// per idea with per-request retries. A round never throws for rating
/// failures; it comes back Failed with a reason instead.
RoundResult evaluate_round(const corpus::IdeaSet& ideas, const Rubric& rubric,
                           RatingProvider& provider, int round_index,
                           const ProviderConfig& config);

/// Run n_rounds independent rounds with at most max_parallel requests in
/// flight; deterministic given a deterministic provider.
JudgeRunResult run_judge(const corpus::IdeaSet& ideas, const Rubric& rubric,
                         RatingProvider& provider, int n_rounds, const ProviderConfig& config);

struct JudgeOutputPaths {
    std::string ratings_csv;
    std::string justifications_log;
};

/// Write the machine-rating CSV (succeeded rounds only) and the
/// justification log with its failed-round trailer into out_dir.
JudgeOutputPaths write_outputs(const JudgeRunResult& result, const std::string& out_dir);

std::string ratings_csv_text(const JudgeRunResult& result);
std::string justifications_text(const JudgeRunResult& result);

/// Bridge into the agreement stage: one Machine RatingRecord per
/// (succeeded round, idea, criterion), rater_id "machine-r<round>".
/// Throws NoSuccessfulRounds when every round failed.
corpus::RatingTable machine_ratings(const JudgeRunResult& result, const corpus::IdeaSet& ideas);

/// Read a previously written machine-rating CSV back as a RatingTable.
corpus::RatingTable load_judge_csv(const std::string& path, const corpus::IdeaSet& ideas);

} // namespace ideate::judge
