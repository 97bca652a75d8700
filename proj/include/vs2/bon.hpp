#pragma once

// Best-of-N selection over judged candidate videos for one prompt, the seeded
// random baseline arm, and the per-metric comparison report against
// externally supplied quality scores.

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <vs2/core.hpp>
#include <vs2/rng.hpp>

namespace vs2 {

// ---------------------------------------------------------------------------
// Candidate sets

struct CandidateSet {
    std::string prompt_id;
    std::vector<Judgment> candidates;
};

inline void validate(const CandidateSet& s) {
    if (s.candidates.size() < 2)
        throw std::invalid_argument("candidate set needs at least 2 candidates: " +
                                    s.prompt_id);
}

// Groups judgments into per-prompt sets, keyed by each row's prompt_id field
// and ordered by first appearance.
inline std::vector<CandidateSet> build_candidate_sets(
    const std::vector<Judgment>& judgments) {
    std::vector<CandidateSet> sets;
    std::map<std::string, std::size_t> index;
    for (const auto& j : judgments) {
        if (!j.extra.contains("prompt_id"))
            throw std::invalid_argument("judgment without prompt_id: " + j.video_id);
        std::string pid = j.extra.at("prompt_id").get<std::string>();
        auto [it, fresh] = index.try_emplace(pid, sets.size());
        if (fresh) sets.push_back({pid, {}});
        sets[it->second].candidates.push_back(j);
    }
    for (const auto& s : sets) validate(s);
    return sets;
}

// ---------------------------------------------------------------------------
// Selection

namespace detail {

// Score source for selection: soft scores when present, else int scores.
inline FloatTriple selection_triple(const Judgment& j) {
    if (j.soft_scores) return *j.soft_scores;
    if (j.scores)
        return {static_cast<double>(j.scores->vq), static_cast<double>(j.scores->ta),
                static_cast<double>(j.scores->pc)};
    throw std::invalid_argument("candidate without scores: " + j.video_id);
}

}  // namespace detail

// Mean of the three dimension scores, the selection criterion.
inline double selection_score(const Judgment& j) {
    auto t = detail::selection_triple(j);
    return (t.vq + t.ta + t.pc) / 3.0;
}

// Index of the candidate maximizing the dimension mean; ties broken by
// higher vq, then lower index.
inline std::size_t select_best(const CandidateSet& set) {
    if (set.candidates.empty())
        throw std::invalid_argument("select_best: empty candidate set");
    std::size_t best = 0;
    double best_mean = selection_score(set.candidates[0]);
    double best_vq = detail::selection_triple(set.candidates[0]).vq;
    for (std::size_t i = 1; i < set.candidates.size(); ++i) {
        double mean = selection_score(set.candidates[i]);
        double vq = detail::selection_triple(set.candidates[i]).vq;
        if (mean > best_mean || (mean == best_mean && vq > best_vq)) {
            best = i;
            best_mean = mean;
            best_vq = vq;
        }
    }
    return best;
}

// Seeded uniform baseline arm.
inline std::size_t random_select(const CandidateSet& set, std::uint64_t seed) {
    if (set.candidates.empty())
        throw std::invalid_argument("random_select: empty candidate set");
    Rng rng(seed);
    return rng.pick_index(set.candidates.size());
}

// ---------------------------------------------------------------------------
// BoN-vs-random report

struct BonArm {
    double bon_mean = 0.0;
    double random_mean = 0.0;
    double delta = 0.0;  // bon_mean - random_mean
};

struct BonReport {
    std::string score_mode = "soft_when_available";
    std::string tie_break = "mean, then vq, then lowest index";
    std::uint64_t seed = 0;
    std::size_t n_sets = 0;
    std::vector<std::string> metrics;
    std::map<std::string, BonArm> per_metric;
};

inline json to_json(const BonReport& r) {
    json metrics = json::object();
    for (const auto& m : r.metrics) {
        const BonArm& a = r.per_metric.at(m);
        metrics[m] = {{"bon_mean", a.bon_mean},
                      {"random_mean", a.random_mean},
                      {"delta", a.delta}};
    }
    return {{"score_mode", r.score_mode}, {"tie_break", r.tie_break},
            {"seed", r.seed},             {"n_sets", r.n_sets},
            {"metrics", metrics}};
}

// external: video_id -> metric name -> value.
using ExternalScores = std::map<std::string, std::map<std::string, double>>;

namespace detail {

inline double external_value(const ExternalScores& external,
                             const std::string& video_id,
                             const std::string& metric) {
    auto vit = external.find(video_id);
    if (vit == external.end() || vit->second.find(metric) == vit->second.end())
        throw std::invalid_argument("missing external score for video '" + video_id +
                                    "', metric '" + metric + "'");
    return vit->second.at(metric);
}

}  // namespace detail

// Per metric, the mean external value of the BoN-selected candidate versus a
// seeded random pick, averaged over the identical prompt sets.  The random
// arm's per-set seed is derived from the master seed and the prompt id, so
// set order does not matter.  An empty metric list means every metric seen
// in the external table.
inline BonReport bon_report(const std::vector<CandidateSet>& sets,
                            const ExternalScores& external,
                            std::vector<std::string> metrics, std::uint64_t seed) {
    if (sets.empty()) throw std::invalid_argument("bon_report: no candidate sets");
    if (metrics.empty()) {
        std::set<std::string> names;
        for (const auto& [vid, row] : external)
            for (const auto& [name, value] : row) names.insert(name);
        metrics.assign(names.begin(), names.end());
        if (metrics.empty())
            throw std::invalid_argument("bon_report: external score table is empty");
    }

    BonReport rep;
    rep.seed = seed;
    rep.n_sets = sets.size();
    rep.metrics = metrics;
    for (const auto& m : metrics) rep.per_metric[m] = BonArm{};

    for (const auto& set : sets) {
        validate(set);
        std::size_t bi = select_best(set);
        std::size_t ri = random_select(set, derive_seed(seed, set.prompt_id));
        const std::string& bon_vid = set.candidates[bi].video_id;
        const std::string& rand_vid = set.candidates[ri].video_id;
        for (const auto& m : metrics) {
            rep.per_metric[m].bon_mean += detail::external_value(external, bon_vid, m);
            rep.per_metric[m].random_mean +=
                detail::external_value(external, rand_vid, m);
        }
    }
    for (auto& [name, arm] : rep.per_metric) {
        arm.bon_mean /= static_cast<double>(sets.size());
        arm.random_mean /= static_cast<double>(sets.size());
        arm.delta = arm.bon_mean - arm.random_mean;
    }
    return rep;
}

}  // namespace vs2
