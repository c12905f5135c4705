#include "ideate/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ideate/errors.hpp"
#include "ideate/stats.hpp"

namespace ideate::agreement {

using corpus::Criterion;
using corpus::Idea;
using corpus::IdeaSet;
using corpus::MeanStd;
using corpus::RaterGroup;
using corpus::RatingRecord;
using corpus::RatingTable;

// ---------------------------------------------------------------------------
// Fleiss' Kappa
// ---------------------------------------------------------------------------

CategoricalMatrix build_matrix(const RatingTable& table, const IdeaSet& ideas,
                               RaterGroup group, Criterion criterion) {
    CategoricalMatrix matrix;
    matrix.raters = table.rater_ids(group);
    for (const Idea& idea : ideas.ideas) matrix.subjects.push_back(idea.id);

    matrix.cells.reserve(matrix.subjects.size());
    for (const std::string& idea_id : matrix.subjects) {
        std::vector<const RatingRecord*> records = table.find(idea_id, group, criterion);
        std::vector<int> row;
        row.reserve(matrix.raters.size());
        for (const std::string& rater : matrix.raters) {
            auto it = std::find_if(records.begin(), records.end(),
                                   [&](const RatingRecord* r) { return r->rater_id == rater; });
            if (it == records.end())
                raise(ErrorCode::IncompleteMatrix,
                      "no " + std::string(to_string(criterion)) + " rating from \"" + rater +
                          "\" for idea \"" + idea_id + "\"");
            row.push_back((*it)->value);
        }
        matrix.cells.push_back(std::move(row));
    }
    return matrix;
}

KappaResult fleiss_kappa(const CategoricalMatrix& matrix) {
    const std::size_t n = matrix.subjects.size();
    const std::size_t r = matrix.raters.size();
    if (n < 2 || r < 2)
        raise(ErrorCode::SampleTooSmall,
              "Fleiss' Kappa needs at least 2 subjects and 2 raters (got " + std::to_string(n) +
                  "x" + std::to_string(r) + ")");
    if (matrix.cells.size() != n)
        raise(ErrorCode::IncompleteMatrix, "matrix row count does not match subject count");

    constexpr int kCategories = 5;
    std::array<double, kCategories> category_counts{};
    double p_sum = 0.0;
    for (const std::vector<int>& row : matrix.cells) {
        if (row.size() != r)
            raise(ErrorCode::IncompleteMatrix, "matrix row length does not match rater count");
        std::array<double, kCategories> nij{};
        for (int value : row) {
            if (value < 1 || value > kCategories)
                raise(ErrorCode::ValueOutOfRange, "category " + std::to_string(value));
            nij[static_cast<std::size_t>(value - 1)] += 1.0;
            category_counts[static_cast<std::size_t>(value - 1)] += 1.0;
        }
        double sum_sq = 0.0;
        for (double c : nij) sum_sq += c * c;
        const double rd = static_cast<double>(r);
        p_sum += (sum_sq - rd) / (rd * (rd - 1.0));
    }

    KappaResult result;
    result.n_subjects = n;
    result.n_raters = r;
    result.p_bar = p_sum / static_cast<double>(n);
    const double total = static_cast<double>(n) * static_cast<double>(r);
    for (double c : category_counts) {
        double pj = c / total;
        result.p_e += pj * pj;
    }
    if (result.p_e >= 1.0) {
        if (result.p_bar >= 1.0) {
            result.kappa = 1.0;
            return result;
        }
        raise(ErrorCode::DegenerateAgreement,
              "expected agreement is 1 with imperfect observed agreement");
    }
    result.kappa = (result.p_bar - result.p_e) / (1.0 - result.p_e);
    return result;
}

// ---------------------------------------------------------------------------
// Aggregate scores and rankings
// ---------------------------------------------------------------------------

std::vector<AggregateScore> group_means(const RatingTable& table, const IdeaSet& ideas,
                                        RaterGroup group) {
    std::vector<AggregateScore> scores;
    scores.reserve(ideas.ideas.size());
    for (const Idea& idea : ideas.ideas) {
        AggregateScore score;
        score.idea_id = idea.id;
        for (Criterion criterion : corpus::kCriteria) {
            std::vector<int> values = table.values(idea.id, group, criterion);
            if (values.empty())
                raise(ErrorCode::MissingCriterion,
                      "idea \"" + idea.id + "\" has no " + std::string(to_string(criterion)) +
                          " rating from group " + std::string(to_string(group)));
            double sum = 0.0;
            for (int v : values) sum += v;
            double mean = sum / static_cast<double>(values.size());
            score.per_criterion_mean[static_cast<std::size_t>(criterion)] = mean;
            score.total += mean;
        }
        scores.push_back(std::move(score));
    }
    return scores;
}

std::optional<std::size_t> RankedList::position(std::string_view idea_id) const {
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].idea_id == idea_id) return i + 1;
    }
    return std::nullopt;
}

RankedList rank(std::span<const AggregateScore> scores) {
    if (scores.empty()) raise(ErrorCode::EmptyTable, "no aggregate scores to rank");
    RankedList list;
    list.entries.reserve(scores.size());
    for (const AggregateScore& score : scores) list.entries.push_back({score.idea_id, score.total});
    std::stable_sort(list.entries.begin(), list.entries.end(),
                     [](const RankedList::Entry& a, const RankedList::Entry& b) {
                         if (a.total != b.total) return a.total > b.total;
                         return a.idea_id < b.idea_id;
                     });
    return list;
}

OverlapResult top_bottom_overlap(const RankedList& a, const RankedList& b, std::size_t k) {
    const std::size_t n = a.entries.size();
    std::set<std::string> pop_a;
    std::set<std::string> pop_b;
    for (const auto& e : a.entries) pop_a.insert(e.idea_id);
    for (const auto& e : b.entries) pop_b.insert(e.idea_id);
    if (pop_a != pop_b)
        raise(ErrorCode::PopulationMismatch, "the two rankings cover different idea populations");
    if (k < 1 || k > n)
        raise(ErrorCode::ValueOutOfRange,
              "overlap k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");

    OverlapResult result;
    auto record_positions = [&](const std::string& idea_id) {
        result.positions[idea_id] = {*a.position(idea_id), *b.position(idea_id)};
    };
    std::set<std::string> b_top;
    std::set<std::string> b_bottom;
    for (std::size_t i = 0; i < k; ++i) {
        b_top.insert(b.entries[i].idea_id);
        b_bottom.insert(b.entries[n - 1 - i].idea_id);
        record_positions(b.entries[i].idea_id);
        record_positions(b.entries[n - 1 - i].idea_id);
    }
    for (std::size_t i = 0; i < k; ++i) {
        const std::string& top_id = a.entries[i].idea_id;
        const std::string& bottom_id = a.entries[n - 1 - i].idea_id;
        if (b_top.contains(top_id)) ++result.top_shared;
        if (b_bottom.contains(bottom_id)) ++result.bottom_shared;
        record_positions(top_id);
        record_positions(bottom_id);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Correlation, distributions, normality
// ---------------------------------------------------------------------------

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        raise(ErrorCode::LengthMismatch,
              "Pearson needs two equal-length series of at least 3 values (got " +
                  std::to_string(x.size()) + " and " + std::to_string(y.size()) + ")");
    const double mx = stats::mean(x);
    const double my = stats::mean(y);
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        raise(ErrorCode::ZeroVariance, "Pearson input has zero variance");
    return {sxy / std::sqrt(sxx * syy), x.size()};
}

Distribution rating_distribution(const RatingTable& table, const IdeaSet& ideas,
                                 RaterGroup group, Criterion criterion) {
    Distribution dist;
    for (const Idea& idea : ideas.ideas) {
        std::vector<int> values = table.values(idea.id, group, criterion);
        if (values.empty()) continue;
        double sum = 0.0;
        for (int v : values) sum += v;
        double mean = sum / static_cast<double>(values.size());
        dist.means.push_back(mean);
        int bin = static_cast<int>(std::floor(mean + 0.5)); // half-up
        bin = std::clamp(bin, 1, 5);
        ++dist.bins[static_cast<std::size_t>(bin - 1)];
    }
    if (dist.means.empty())
        raise(ErrorCode::EmptyGroup,
              "no " + std::string(to_string(criterion)) + " ratings from group " +
                  std::string(to_string(group)));
    return dist;
}

namespace {

// Wichura's algorithm AS 241 (PPND16): inverse of the standard normal CDF.
double ppnd16(double p) {
    static constexpr double a[8] = {3.3871328727963666080e0, 1.3314166789178437745e2,
                                    1.9715909503065514427e3, 1.3731693765509461125e4,
                                    4.5921953931549871457e4, 6.7265770927008700853e4,
                                    3.3430575583588128105e4, 2.5090809287301226727e3};
    static constexpr double b[8] = {1.0, 4.2313330701600911252e1, 6.8718700749205790830e2,
                                    5.3941960214247511077e3,     2.1213794301586595867e4,
                                    3.9307895800092710610e4,     2.8729085735721942674e4,
                                    5.2264952788528545610e3};
    static constexpr double c[8] = {1.42343711074968357734e0,  4.63033784615654529590e0,
                                    5.76949722146069140550e0,  3.64784832476320460504e0,
                                    1.27045825245236838258e0,  2.41780725177450611770e-1,
                                    2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[8] = {1.0,
                                    2.05319162663775882187e0,
                                    1.67638483018380384940e0,
                                    6.89767334985100004550e-1,
                                    1.48103976427480074590e-1,
                                    1.51986665636164571966e-2,
                                    5.47593808499534494600e-4,
                                    1.05075007164441684324e-9};
    static constexpr double e[8] = {6.65790464350110377720e0,  5.46378491116411436990e0,
                                    1.78482653991729133580e0,  2.96560571828504891230e-1,
                                    2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                    2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[8] = {1.0,
                                    5.99832206555887937690e-1,
                                    1.36929880922735805310e-1,
                                    1.48753612908506148525e-2,
                                    7.86869131145613259100e-4,
                                    1.84631831751005468180e-6,
                                    1.42151175831644588870e-15,
                                    0.0};
    auto ratio = [](const double (&num)[8], const double (&den)[8], double r) {
        double top = num[7];
        double bottom = den[7];
        for (int i = 6; i >= 0; --i) {
            top = top * r + num[i];
            bottom = bottom * r + den[i];
        }
        return top / bottom;
    };

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * ratio(a, b, r);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    if (r <= 0.0) return q < 0.0 ? -HUGE_VAL : HUGE_VAL;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        value = ratio(c, d, r - 1.6);
    } else {
        value = ratio(e, f, r - 5.0);
    }
    return q < 0.0 ? -value : value;
}

double poly(std::span<const double> coeffs, double x) {
    double value = coeffs.back();
    for (std::size_t i = coeffs.size() - 1; i-- > 0;) value = value * x + coeffs[i];
    return value;
}

// Upper tail of the standard normal distribution.
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

} // namespace

NormalityResult shapiro_wilk(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 3 || n > 5000)
        raise(ErrorCode::SampleTooSmall,
              "Shapiro-Wilk supports 3 <= n <= 5000 (got " + std::to_string(n) + ")");
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    if (x.front() == x.back())
        raise(ErrorCode::ZeroVariance, "all sample values are identical");

    // Royston's AS R94 weights: Blom scores with polynomial corrections on
    // the two largest coefficients, symmetric about the median.
    const std::size_t n2 = n / 2;
    const double an = static_cast<double>(n);
    std::vector<double> weights(n, 0.0);
    if (n == 3) {
        weights[0] = -std::sqrt(0.5);
        weights[2] = std::sqrt(0.5);
    } else {
        static constexpr double c1[6] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
        static constexpr double c2[6] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
        std::vector<double> m(n2);
        double summ2 = 0.0;
        for (std::size_t i = 0; i < n2; ++i) {
            m[i] = ppnd16((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
            summ2 += m[i] * m[i];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(an);
        const double a1 = poly(c1, rsn) - m[0] / ssumm2;
        std::size_t first_blom; // index of the first uncorrected weight
        double fac;
        double a2 = 0.0;
        if (n > 5) {
            first_blom = 2;
            a2 = -m[1] / ssumm2 + poly(c2, rsn);
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
        } else {
            first_blom = 1;
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
        }
        weights[0] = -a1;
        weights[n - 1] = a1;
        if (n > 5) {
            weights[1] = -a2;
            weights[n - 2] = a2;
        }
        for (std::size_t i = first_blom; i < n2; ++i) {
            weights[i] = m[i] / fac;
            weights[n - 1 - i] = -m[i] / fac;
        }
    }

    // W as the squared correlation between the sorted data and the weights.
    const double wm = stats::mean(weights);
    const double xm = stats::mean(x);
    double ssw = 0.0;
    double ssx = 0.0;
    double sxw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dw = weights[i] - wm;
        const double dx = x[i] - xm;
        ssw += dw * dw;
        ssx += dx * dx;
        sxw += dw * dx;
    }
    const double ssq = std::sqrt(ssw * ssx);
    const double w1 = (ssq - sxw) * (ssq + sxw) / (ssw * ssx); // 1 - W
    NormalityResult result;
    result.n = n;
    result.w = 1.0 - w1;

    // P-value approximation (Royston 1995).
    if (n == 3) {
        const double pi6 = 1.90985931710274;  // 6 / pi
        const double stqr = 1.04719755119660; // asin(sqrt(3/4))
        double p = pi6 * (std::asin(std::sqrt(result.w)) - stqr);
        result.p_value = std::clamp(p, 0.0, 1.0);
        return result;
    }
    const double y = std::log(w1);
    double mu;
    double sigma;
    if (n <= 11) {
        static constexpr double g[2] = {-2.273, 0.459};
        static constexpr double c3[4] = {0.5440, -0.39978, 0.025054, -6.714e-4};
        static constexpr double c4[4] = {1.3822, -0.77857, 0.062767, -0.0020322};
        const double gamma = poly(g, an);
        if (y >= gamma) {
            result.p_value = 1e-19;
            return result;
        }
        const double y2 = -std::log(gamma - y);
        mu = poly(c3, an);
        sigma = std::exp(poly(c4, an));
        result.p_value = normal_sf((y2 - mu) / sigma);
        return result;
    }
    static constexpr double c5[4] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double c6[3] = {-0.4803, -0.082676, 0.0030302};
    const double ln_n = std::log(an);
    mu = poly(c5, ln_n);
    sigma = std::exp(poly(c6, ln_n));
    result.p_value = normal_sf((y - mu) / sigma);
    return result;
}

// ---------------------------------------------------------------------------
// Chosen-idea comparison
// ---------------------------------------------------------------------------

namespace {

MeanStd summarize(const std::vector<double>& values) {
    if (values.empty()) return {};
    return {stats::mean(values), stats::sample_std(values), values.size()};
}

} // namespace

ChosenComparison chosen_idea_comparison(const RatingTable& table, const IdeaSet& ideas) {
    ChosenComparison comparison;
    std::set<std::string> teams;
    std::map<std::string, std::vector<const Idea*>> chosen_by_team;
    for (const Idea& idea : ideas.ideas) {
        teams.insert(idea.team);
        if (idea.chosen) chosen_by_team[idea.team].push_back(&idea);
    }
    if (chosen_by_team.empty()) raise(ErrorCode::NoChosenIdeas, "no idea carries the chosen flag");
    for (const std::string& team : teams) {
        if (!chosen_by_team.contains(team))
            raise(ErrorCode::NoChosenIdeas, "team \"" + team + "\" has no chosen idea");
    }
    comparison.teams.assign(teams.begin(), teams.end());

    for (RaterGroup group : corpus::kRaterGroups) {
        for (Criterion criterion : corpus::kCriteria) {
            auto& cells = comparison.chosen[static_cast<std::size_t>(group)]
                                           [static_cast<std::size_t>(criterion)];
            for (const std::string& team : comparison.teams) {
                std::vector<double> raw;
                for (const Idea* idea : chosen_by_team[team]) {
                    for (int v : table.values(idea->id, group, criterion))
                        raw.push_back(static_cast<double>(v));
                }
                cells.push_back(summarize(raw));
            }
            // All-ideas column: per-idea means, then mean/std over those.
            std::vector<double> idea_means;
            for (const Idea& idea : ideas.ideas) {
                std::vector<int> values = table.values(idea.id, group, criterion);
                if (values.empty()) continue;
                double sum = 0.0;
                for (int v : values) sum += v;
                idea_means.push_back(sum / static_cast<double>(values.size()));
            }
            comparison.all_ideas[static_cast<std::size_t>(group)]
                                [static_cast<std::size_t>(criterion)] = summarize(idea_means);
        }
    }
    return comparison;
}

} // namespace ideate::agreement
