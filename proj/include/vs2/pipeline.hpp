#pragma once

// Dataset-curation mechanics: rule-based prompt filtering per source,
// LLM-backed semantic filtering through a pluggable adapter, camera-motion
// augmentation, tier-balanced model sampling, and human/model score
// reconciliation.

#include <array>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <vs2/core.hpp>
#include <vs2/rng.hpp>

namespace vs2 {

// ---------------------------------------------------------------------------
// Prompt candidates

enum class PromptSource { Vidprom, Koala, OcrText, MultiAction, CameraMotion };

inline const char* prompt_source_key(PromptSource s) {
    switch (s) {
        case PromptSource::Vidprom: return "vidprom";
        case PromptSource::Koala: return "koala";
        case PromptSource::OcrText: return "ocr_text";
        case PromptSource::MultiAction: return "multi_action";
        case PromptSource::CameraMotion: return "camera_motion";
    }
    return "";
}

inline std::optional<PromptSource> prompt_source_from_string(std::string_view s) {
    if (s == "vidprom") return PromptSource::Vidprom;
    if (s == "koala") return PromptSource::Koala;
    if (s == "ocr_text") return PromptSource::OcrText;
    if (s == "multi_action") return PromptSource::MultiAction;
    if (s == "camera_motion") return PromptSource::CameraMotion;
    return std::nullopt;
}

struct PromptCandidate {
    std::string prompt_id;
    std::string text;
    PromptSource source = PromptSource::Vidprom;
    std::optional<double> nsfw_prob;
    std::optional<double> segment_duration_s;
    std::optional<double> clarity;
    std::optional<double> aesthetic;
    json extra = json::object();  // unknown input fields, echoed on output
};

inline void validate(const PromptCandidate& p) {
    if (p.text.empty()) throw std::invalid_argument("prompt candidate: empty text");
    if (p.nsfw_prob && !(*p.nsfw_prob >= 0.0 && *p.nsfw_prob <= 1.0))
        throw std::invalid_argument("prompt candidate: nsfw_prob outside [0, 1]");
}

inline PromptCandidate prompt_candidate_from_json(const json& j) {
    PromptCandidate p;
    detail::require_field(j, "text");
    detail::require_field(j, "source");
    p.prompt_id = j.value("prompt_id", std::string{});
    p.text = j.at("text").get<std::string>();
    std::string src = j.at("source").get<std::string>();
    auto parsed = prompt_source_from_string(src);
    if (!parsed) throw std::invalid_argument("unknown prompt source: " + src);
    p.source = *parsed;
    if (j.contains("nsfw_prob")) p.nsfw_prob = j.at("nsfw_prob").get<double>();
    if (j.contains("segment_duration_s"))
        p.segment_duration_s = j.at("segment_duration_s").get<double>();
    if (j.contains("clarity")) p.clarity = j.at("clarity").get<double>();
    if (j.contains("aesthetic")) p.aesthetic = j.at("aesthetic").get<double>();
    p.extra = detail::take_extra(j, {"prompt_id", "text", "source", "nsfw_prob",
                                     "segment_duration_s", "clarity", "aesthetic"});
    validate(p);
    return p;
}

inline json to_json(const PromptCandidate& p) {
    json j = p.extra;
    if (!p.prompt_id.empty()) j["prompt_id"] = p.prompt_id;
    j["text"] = p.text;
    j["source"] = prompt_source_key(p.source);
    if (p.nsfw_prob) j["nsfw_prob"] = *p.nsfw_prob;
    if (p.segment_duration_s) j["segment_duration_s"] = *p.segment_duration_s;
    if (p.clarity) j["clarity"] = *p.clarity;
    if (p.aesthetic) j["aesthetic"] = *p.aesthetic;
    return j;
}

// ---------------------------------------------------------------------------
// Rule-based filtering

// Prompts mentioning these cannot be honored by text-to-video models
// (image attachments, aspect ratios, fixed durations).
inline const std::array<std::string, 9>& trigger_words() {
    static const std::array<std::string, 9> words = {
        "screen size", "16:9", "1:1", "3:4", "4k", "8k",
        "seconds",     "message", "attach"};
    return words;
}

struct FilterVerdict {
    bool keep = true;
    std::string reason;  // machine-readable code, empty when kept

    friend bool operator==(const FilterVerdict&, const FilterVerdict&) = default;
};

namespace detail {

inline std::size_t word_count(const std::string& text) {
    std::size_t n = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        bool space = std::isspace(c) != 0;
        if (!space && !in_word) ++n;
        in_word = !space;
    }
    return n;
}

inline bool contains_ci(const std::string& haystack, const std::string& needle) {
    return lower(haystack).find(lower(needle)) != std::string::npos;
}

inline double require_present(const std::optional<double>& v, const char* name) {
    if (!v)
        throw std::invalid_argument(std::string("missing required field: ") + name);
    return *v;
}

}  // namespace detail

// First matching rule wins, in the documented order:
// vidprom nsfw -> trigger_word -> length; koala duration -> clarity -> aesthetic.
inline FilterVerdict filter_prompt(const PromptCandidate& p) {
    switch (p.source) {
        case PromptSource::Vidprom: {
            if (detail::require_present(p.nsfw_prob, "nsfw_prob") > 0.2)
                return {false, "nsfw"};
            for (const auto& w : trigger_words())
                if (detail::contains_ci(p.text, w)) return {false, "trigger_word"};
            std::size_t words = detail::word_count(p.text);
            if (words < 15 || words > 100) return {false, "length"};
            return {true, ""};
        }
        case PromptSource::Koala: {
            if (detail::require_present(p.segment_duration_s, "segment_duration_s") >=
                5.0)
                return {false, "duration"};
            if (detail::require_present(p.clarity, "clarity") < 0.95)
                return {false, "clarity"};
            if (detail::require_present(p.aesthetic, "aesthetic") < 4.0)
                return {false, "aesthetic"};
            return {true, ""};
        }
        default:
            return {true, ""};  // manually curated sources pass rule filtering
    }
}

// One audit line per candidate: the candidate echoed plus the verdict.
inline json filter_audit_record(const PromptCandidate& p, const FilterVerdict& v) {
    json j = to_json(p);
    j["verdict"] = v.keep ? "keep" : "reject";
    if (!v.keep) j["reason"] = v.reason;
    return j;
}

// ---------------------------------------------------------------------------
// Semantic filtering (pluggable text-judge adapter)

// The four exclusion criteria forwarded to the judge.
inline const std::array<std::string, 4>& semantic_criteria() {
    static const std::array<std::string, 4> criteria = {
        "vague or meaningless, lacking a concrete task",
        "containing specific people or names",
        "missing substantive verbs or motion, closer to images than videos",
        "describing over three actions or events, too complex for short videos"};
    return criteria;
}

struct SemanticVerdict {
    enum class Action { Keep, Revise, Reject };
    Action action = Action::Keep;
    std::string new_text;  // Revise only
    std::string reason;    // Reject only
};

// Adapter from a structured query to a constrained verdict; may throw on
// transport failure.
using SemanticJudge = std::function<SemanticVerdict(const json& query)>;

struct SemanticOutcome {
    enum class Status { Keep, Revise, Reject, Unfiltered };
    Status status = Status::Keep;
    std::string text;    // revised text when Revise
    std::string reason;  // reject code, or the adapter error when Unfiltered
};

// Runs the judge on the candidate; adapter failures are retried and, if
// exhausted, surface as Unfiltered rather than a silent keep.  Revision is a
// koala-only affordance.
inline SemanticOutcome semantic_filter(const PromptCandidate& p,
                                       const SemanticJudge& judge,
                                       int max_attempts = 3) {
    if (max_attempts < 1)
        throw std::invalid_argument("semantic_filter: max_attempts must be >= 1");
    json query = {{"prompt", p.text},
                  {"source", prompt_source_key(p.source)},
                  {"exclude_if", semantic_criteria()},
                  {"revision_permitted", p.source == PromptSource::Koala}};
    std::string last_error;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        SemanticVerdict v;
        try {
            v = judge(query);
        } catch (const std::exception& e) {
            last_error = e.what();
            continue;
        }
        switch (v.action) {
            case SemanticVerdict::Action::Keep:
                return {SemanticOutcome::Status::Keep, "", ""};
            case SemanticVerdict::Action::Reject:
                return {SemanticOutcome::Status::Reject, "", v.reason};
            case SemanticVerdict::Action::Revise:
                if (p.source != PromptSource::Koala)
                    throw std::runtime_error(
                        std::string("revision not permitted for source: ") +
                        prompt_source_key(p.source));
                return {SemanticOutcome::Status::Revise, v.new_text, ""};
        }
    }
    return {SemanticOutcome::Status::Unfiltered, "", last_error};
}

// ---------------------------------------------------------------------------
// Camera-motion augmentation

inline const std::array<std::string, 9>& camera_motions() {
    static const std::array<std::string, 9> motions = {
        "Zoom in",  "Zoom out", "Pan left", "Pan right",     "Pan up",
        "Pan down", "Tilt up",  "Tilt down", "Tracking shot"};
    return motions;
}

namespace detail {

inline std::string rtrim(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    return s;
}

// True when the trimmed text already ends in one of the listed motion
// phrases (case-insensitive, optional trailing period, word-bounded).
inline bool ends_with_motion(const std::string& text) {
    std::string t = lower(rtrim(text));
    if (!t.empty() && t.back() == '.') t = rtrim(t.substr(0, t.size() - 1));
    for (const auto& m : camera_motions()) {
        std::string needle = lower(m);
        if (t.size() < needle.size()) continue;
        if (t.compare(t.size() - needle.size(), needle.size(), needle) != 0)
            continue;
        if (t.size() == needle.size()) return true;
        char before = t[t.size() - needle.size() - 1];
        if (!std::isalnum(static_cast<unsigned char>(before))) return true;
    }
    return false;
}

}  // namespace detail

// Appends ". <motion>." after trimming trailing whitespace and a trailing
// period; text already ending in a listed motion is returned unchanged.
// When motion is absent one is chosen uniformly from the list under seed.
inline std::string augment_camera_motion(const std::string& text,
                                         std::optional<std::string> motion,
                                         std::uint64_t seed = 0) {
    if (motion) {
        bool known = false;
        for (const auto& m : camera_motions())
            if (m == *motion) { known = true; break; }
        if (!known)
            throw std::invalid_argument("unknown camera motion: " + *motion);
    } else {
        Rng rng(derive_seed(seed, "camera_motion"));
        motion = camera_motions()[rng.pick_index(camera_motions().size())];
    }
    if (detail::ends_with_motion(text)) return text;
    std::string base = detail::rtrim(text);
    if (!base.empty() && base.back() == '.')
        base = detail::rtrim(base.substr(0, base.size() - 1));
    if (base.empty()) throw std::invalid_argument("augment_camera_motion: empty text");
    return base + ". " + *motion + ".";
}

// ---------------------------------------------------------------------------
// Tier-balanced model sampling

struct TierCountRange {
    int min = 0;
    int max = 0;

    friend bool operator==(const TierCountRange&, const TierCountRange&) = default;
};

// Draw counts per quality tier; defaults give 1-2 poor, 3-4 moderate, 3-4
// good, exactly 1 perfect, totalling 10.
struct ModelSampleConfig {
    std::map<Tier, TierCountRange> ranges = {{Tier::Poor, {1, 2}},
                                             {Tier::Moderate, {3, 4}},
                                             {Tier::Good, {3, 4}},
                                             {Tier::Perfect, {1, 1}}};
    int total = 10;
};

// Picks `total` distinct model ids across tiers: a feasible per-tier count
// vector is chosen uniformly, then ids are drawn without replacement within
// each tier.  Deterministic under seed.
inline std::vector<std::string> sample_models_for_prompt(
    const std::map<Tier, std::vector<std::string>>& roster, std::uint64_t seed,
    const ModelSampleConfig& cfg = {}) {
    for (Tier t : kTiers) {
        auto it = roster.find(t);
        if (it == roster.end() || it->second.empty())
            throw std::invalid_argument(std::string("empty tier: ") + tier_key(t));
        if (cfg.ranges.find(t) == cfg.ranges.end())
            throw std::invalid_argument(std::string("no count range for tier: ") +
                                        tier_key(t));
    }

    // Enumerate feasible count vectors in tier order.
    std::vector<std::array<int, 4>> feasible;
    std::array<int, 4> sizes{}, lo{}, hi{};
    for (std::size_t i = 0; i < kTiers.size(); ++i) {
        const auto& range = cfg.ranges.at(kTiers[i]);
        sizes[i] = static_cast<int>(roster.at(kTiers[i]).size());
        lo[i] = range.min;
        hi[i] = std::min(range.max, sizes[i]);
    }
    for (int a = lo[0]; a <= hi[0]; ++a)
        for (int b = lo[1]; b <= hi[1]; ++b)
            for (int c = lo[2]; c <= hi[2]; ++c) {
                int d = cfg.total - a - b - c;
                if (d >= lo[3] && d <= hi[3]) feasible.push_back({a, b, c, d});
            }
    if (feasible.empty())
        throw std::invalid_argument(
            "sample_models_for_prompt: no feasible tier allocation for roster");

    Rng rng(seed);
    const auto& counts = feasible[rng.pick_index(feasible.size())];
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(cfg.total));
    for (std::size_t i = 0; i < kTiers.size(); ++i) {
        const auto& ids = roster.at(kTiers[i]);
        for (std::size_t k :
             sample_without_replacement(ids.size(), static_cast<std::size_t>(counts[i]),
                                        rng))
            out.push_back(ids[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Score reconciliation

enum class ReconcileStatus { Accepted, Averaged, RescoreNeeded, Discarded };

inline const char* reconcile_status_name(ReconcileStatus s) {
    switch (s) {
        case ReconcileStatus::Accepted: return "accepted";
        case ReconcileStatus::Averaged: return "averaged";
        case ReconcileStatus::RescoreNeeded: return "rescore_needed";
        case ReconcileStatus::Discarded: return "discarded";
    }
    return "";
}

struct ReconcileOutcome {
    ReconcileStatus status = ReconcileStatus::Accepted;
    std::optional<IntTriple> final_scores;
    int attempts = 0;
};

// Per-dimension rules: diff <= 1 keeps the human value; diff == 2 averages
// (exact, since equal parity); any dimension with diff >= 3 sends the whole
// entry back for rescoring.
inline ReconcileOutcome reconcile_scores(const IntTriple& human,
                                         const IntTriple& model) {
    if (!is_valid(human) || !is_valid(model))
        throw std::invalid_argument("reconcile_scores: scores outside 1-5");
    auto h = human.as_array(), m = model.as_array();
    for (std::size_t d = 0; d < 3; ++d)
        if (std::abs(h[d] - m[d]) >= 3)
            return {ReconcileStatus::RescoreNeeded, std::nullopt, 1};
    IntTriple final_scores = human;
    bool averaged = false;
    std::array<int*, 3> out = {&final_scores.vq, &final_scores.ta, &final_scores.pc};
    for (std::size_t d = 0; d < 3; ++d) {
        if (std::abs(h[d] - m[d]) == 2) {
            *out[d] = (h[d] + m[d]) / 2;  // same parity, exact
            averaged = true;
        }
    }
    return {averaged ? ReconcileStatus::Averaged : ReconcileStatus::Accepted,
            final_scores, 1};
}

// Yields a fresh model triple per call; may throw on transport failure.
using RescoreSupplier = std::function<IntTriple()>;

// Re-pulls model triples until reconciliation settles; after max_attempts
// rescore rounds the entry is discarded.
inline ReconcileOutcome reconcile_entry(const IntTriple& human,
                                        const RescoreSupplier& supplier,
                                        int max_attempts = 3) {
    if (max_attempts < 1)
        throw std::invalid_argument("reconcile_entry: max_attempts must be >= 1");
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        IntTriple model;
        try {
            model = supplier();
        } catch (const std::exception& e) {
            throw std::runtime_error("rescoring supplier failed on attempt " +
                                     std::to_string(attempt) + ": " + e.what());
        }
        ReconcileOutcome out = reconcile_scores(human, model);
        if (out.status != ReconcileStatus::RescoreNeeded) {
            out.attempts = attempt;
            return out;
        }
    }
    return {ReconcileStatus::Discarded, std::nullopt, max_attempts};
}

}  // namespace vs2
