// Core domain types and the JSONL data model shared by every other module.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace vs2 {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Dimensions

enum class Dimension { VisualQuality, TextAlignment, PhysicalConsistency };

inline constexpr std::array<Dimension, 3> kDimensions = {
    Dimension::VisualQuality, Dimension::TextAlignment,
    Dimension::PhysicalConsistency};

inline constexpr std::size_t dim_index(Dimension d) {
    return static_cast<std::size_t>(d);
}

// Short keys used as JSON field names.
inline constexpr std::array<const char*, 3> kDimensionKeys = {"vq", "ta", "pc"};

inline const char* dimension_key(Dimension d) {
    return kDimensionKeys[dim_index(d)];
}

inline const char* dimension_name(Dimension d) {
    switch (d) {
        case Dimension::VisualQuality: return "visual quality";
        case Dimension::TextAlignment: return "text alignment";
        case Dimension::PhysicalConsistency: return "physical consistency";
    }
    return "";
}

// ---------------------------------------------------------------------------
// Score triples

// Integer score triple, each component in {1..5}.
struct IntTriple {
    int vq = 1;
    int ta = 1;
    int pc = 1;

    int at(Dimension d) const {
        switch (d) {
            case Dimension::VisualQuality: return vq;
            case Dimension::TextAlignment: return ta;
            case Dimension::PhysicalConsistency: return pc;
        }
        return vq;
    }
    int& at(Dimension d) {
        switch (d) {
            case Dimension::VisualQuality: return vq;
            case Dimension::TextAlignment: return ta;
            case Dimension::PhysicalConsistency: return pc;
        }
        return vq;
    }
    std::array<int, 3> as_array() const { return {vq, ta, pc}; }

    friend bool operator==(const IntTriple&, const IntTriple&) = default;
};

// Soft score triple, each component in [1.0, 5.0].
struct FloatTriple {
    double vq = 1.0;
    double ta = 1.0;
    double pc = 1.0;

    double at(Dimension d) const {
        switch (d) {
            case Dimension::VisualQuality: return vq;
            case Dimension::TextAlignment: return ta;
            case Dimension::PhysicalConsistency: return pc;
        }
        return vq;
    }
    double& at(Dimension d) {
        switch (d) {
            case Dimension::VisualQuality: return vq;
            case Dimension::TextAlignment: return ta;
            case Dimension::PhysicalConsistency: return pc;
        }
        return vq;
    }
    std::array<double, 3> as_array() const { return {vq, ta, pc}; }

    friend bool operator==(const FloatTriple&, const FloatTriple&) = default;
};

inline bool is_valid_score(int s) { return s >= 1 && s <= 5; }

inline bool is_valid(const IntTriple& t) {
    return is_valid_score(t.vq) && is_valid_score(t.ta) && is_valid_score(t.pc);
}

inline bool is_valid(const FloatTriple& t) {
    for (double v : t.as_array())
        if (!(v >= 1.0 && v <= 5.0)) return false;
    return true;
}

// Half-away-from-zero rounding (2.5 -> 3), the convention for MOS-style scores.
inline int round_half_away(double x) {
    return static_cast<int>(std::llround(x));
}

inline int clamp_score(int s) { return s < 1 ? 1 : (s > 5 ? 5 : s); }

// Round each component half away from zero, then clamp to {1..5}.
inline IntTriple round_triple(const FloatTriple& t) {
    return IntTriple{clamp_score(round_half_away(t.vq)),
                     clamp_score(round_half_away(t.ta)),
                     clamp_score(round_half_away(t.pc))};
}

// ---------------------------------------------------------------------------
// Token-level score distribution

// Unnormalized weights over the five score tokens; normalization happens in
// soft_score.
struct TokenScoreDistribution {
    std::array<double, 5> weights{};  // weights[s - 1] = p(s)

    double weight(int score) const { return weights[score - 1]; }
    void set(int score, double w) { weights[score - 1] = w; }
    double total() const {
        double t = 0.0;
        for (double w : weights) t += w;
        return t;
    }
    bool valid() const {
        bool any = false;
        for (double w : weights) {
            if (w < 0.0) return false;
            if (w > 0.0) any = true;
        }
        return any;
    }

    friend bool operator==(const TokenScoreDistribution&,
                           const TokenScoreDistribution&) = default;
};

// ---------------------------------------------------------------------------
// Records

enum class Tier { Perfect, Good, Moderate, Poor };

inline constexpr std::array<Tier, 4> kTiers = {Tier::Perfect, Tier::Good,
                                               Tier::Moderate, Tier::Poor};

inline const char* tier_key(Tier t) {
    switch (t) {
        case Tier::Perfect: return "perfect";
        case Tier::Good: return "good";
        case Tier::Moderate: return "moderate";
        case Tier::Poor: return "poor";
    }
    return "";
}

std::optional<Tier> tier_from_string(std::string_view s);

struct VideoEntry {
    std::string video_id;
    std::string prompt_id;
    std::string prompt_text;
    std::string model_id;
    Tier tier = Tier::Moderate;
    std::string media_uri;
    double fps = 0.0;
    double duration_s = 0.0;
    int width = 0;
    int height = 0;
    json extra = json::object();  // unknown input fields, echoed on output
};

struct AnnotationRecord {
    std::string video_id;
    std::string annotator_id;
    IntTriple scores;
    std::array<std::optional<std::string>, 3> comments;  // indexed by dimension
    json extra = json::object();
};

struct Judgment {
    std::string video_id;
    std::string raw_text;
    std::string rationale;
    std::optional<IntTriple> scores;
    std::optional<std::array<TokenScoreDistribution, 3>> token_dists;
    std::optional<FloatTriple> soft_scores;
    bool parse_failed = false;
    json extra = json::object();
};

enum class PrefLabel { A, B, Tie };

inline const char* pref_label_key(PrefLabel l) {
    switch (l) {
        case PrefLabel::A: return "A";
        case PrefLabel::B: return "B";
        case PrefLabel::Tie: return "Tie";
    }
    return "";
}

std::optional<PrefLabel> pref_label_from_string(std::string_view s);

// Which dimension a preference label judges; Overall = mean over dimensions.
enum class PrefScope { VisualQuality, TextAlignment, PhysicalConsistency, Overall };

inline const char* pref_scope_key(PrefScope s) {
    switch (s) {
        case PrefScope::VisualQuality: return "vq";
        case PrefScope::TextAlignment: return "ta";
        case PrefScope::PhysicalConsistency: return "pc";
        case PrefScope::Overall: return "overall";
    }
    return "";
}

std::optional<PrefScope> pref_scope_from_string(std::string_view s);

struct PreferencePair {
    std::string pair_id;
    std::string video_a;
    std::string video_b;
    PrefLabel gt_label = PrefLabel::Tie;
    PrefScope dimension_scope = PrefScope::Overall;
    json extra = json::object();
};

// ---------------------------------------------------------------------------
// Validation

// Scores below 5 are expected to carry a comment; returned as lint warnings,
// not hard errors.
inline std::vector<std::string> lint_annotation(const AnnotationRecord& rec) {
    std::vector<std::string> warnings;
    for (Dimension d : kDimensions) {
        int s = rec.scores.at(d);
        const auto& comment = rec.comments[dim_index(d)];
        bool empty = !comment.has_value() || comment->empty();
        if (s < 5 && empty) {
            warnings.push_back(std::string(dimension_key(d)) + " score " +
                               std::to_string(s) + " has no comment");
        }
    }
    return warnings;
}

inline void validate(const VideoEntry& v) {
    if (v.video_id.empty()) throw std::invalid_argument("video_id empty");
    if (!(v.fps > 0.0)) throw std::invalid_argument("fps must be > 0");
    if (!(v.duration_s > 0.0))
        throw std::invalid_argument("duration_s must be > 0");
    if (v.width <= 0 || v.height <= 0)
        throw std::invalid_argument("width/height must be positive");
}

inline void validate(const Judgment& j) {
    if (j.soft_scores && !j.token_dists)
        throw std::invalid_argument("soft_scores present without token_dists");
    if (!j.parse_failed && !j.scores)
        throw std::invalid_argument("judgment without scores must be parse_failed");
    if (j.scores && !is_valid(*j.scores))
        throw std::invalid_argument("judgment scores out of range");
}

inline void validate(const PreferencePair& p) {
    if (p.video_a == p.video_b)
        throw std::invalid_argument("pair compares a video with itself: " +
                                    p.video_a);
}

// ---------------------------------------------------------------------------
// JSON codecs. Unknown fields survive decode -> encode round trips via the
// `extra` member of each record.

json to_json(const IntTriple& t);
json to_json(const FloatTriple& t);
IntTriple int_triple_from_json(const json& j);
FloatTriple float_triple_from_json(const json& j);

json to_json(const TokenScoreDistribution& d);
TokenScoreDistribution token_dist_from_json(const json& j);

json to_json(const VideoEntry& v);
VideoEntry video_entry_from_json(const json& j);

json to_json(const AnnotationRecord& r);
AnnotationRecord annotation_from_json(const json& j);

json to_json(const Judgment& jd);
Judgment judgment_from_json(const json& j);

json to_json(const PreferencePair& p);
PreferencePair pair_from_json(const json& j);

// ---------------------------------------------------------------------------
// Implementation

namespace detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

// Remaining object fields after the named ones are consumed.
inline json take_extra(json obj, std::initializer_list<const char*> known) {
    for (const char* k : known) obj.erase(k);
    return obj;
}

inline void require_field(const json& j, const char* key) {
    if (!j.contains(key))
        throw std::invalid_argument(std::string("missing field: ") + key);
}

}  // namespace detail

inline std::optional<Tier> tier_from_string(std::string_view s) {
    std::string k = detail::lower(s);
    for (Tier t : kTiers)
        if (k == tier_key(t)) return t;
    return std::nullopt;
}

inline std::optional<PrefLabel> pref_label_from_string(std::string_view s) {
    std::string k = detail::lower(s);
    if (k == "a") return PrefLabel::A;
    if (k == "b") return PrefLabel::B;
    if (k == "tie") return PrefLabel::Tie;
    return std::nullopt;
}

inline std::optional<PrefScope> pref_scope_from_string(std::string_view s) {
    std::string k = detail::lower(s);
    if (k == "vq") return PrefScope::VisualQuality;
    if (k == "ta") return PrefScope::TextAlignment;
    if (k == "pc") return PrefScope::PhysicalConsistency;
    if (k == "overall") return PrefScope::Overall;
    return std::nullopt;
}

inline json to_json(const IntTriple& t) {
    return json{{"vq", t.vq}, {"ta", t.ta}, {"pc", t.pc}};
}

inline json to_json(const FloatTriple& t) {
    return json{{"vq", t.vq}, {"ta", t.ta}, {"pc", t.pc}};
}

inline IntTriple int_triple_from_json(const json& j) {
    detail::require_field(j, "vq");
    detail::require_field(j, "ta");
    detail::require_field(j, "pc");
    return IntTriple{j.at("vq").get<int>(), j.at("ta").get<int>(),
                     j.at("pc").get<int>()};
}

inline FloatTriple float_triple_from_json(const json& j) {
    detail::require_field(j, "vq");
    detail::require_field(j, "ta");
    detail::require_field(j, "pc");
    return FloatTriple{j.at("vq").get<double>(), j.at("ta").get<double>(),
                       j.at("pc").get<double>()};
}

// Sparse representation: only positive weights are written.
inline json to_json(const TokenScoreDistribution& d) {
    json j = json::object();
    for (int s = 1; s <= 5; ++s)
        if (d.weight(s) > 0.0) j[std::to_string(s)] = d.weight(s);
    return j;
}

inline TokenScoreDistribution token_dist_from_json(const json& j) {
    TokenScoreDistribution d;
    for (int s = 1; s <= 5; ++s) {
        std::string key = std::to_string(s);
        if (j.contains(key)) d.set(s, j.at(key).get<double>());
    }
    return d;
}

inline json to_json(const VideoEntry& v) {
    json j = v.extra;
    j["video_id"] = v.video_id;
    j["prompt_id"] = v.prompt_id;
    j["prompt_text"] = v.prompt_text;
    j["model_id"] = v.model_id;
    j["tier"] = tier_key(v.tier);
    j["media_uri"] = v.media_uri;
    j["fps"] = v.fps;
    j["duration_s"] = v.duration_s;
    j["width"] = v.width;
    j["height"] = v.height;
    return j;
}

inline VideoEntry video_entry_from_json(const json& j) {
    VideoEntry v;
    detail::require_field(j, "video_id");
    v.video_id = j.at("video_id").get<std::string>();
    v.prompt_id = j.value("prompt_id", std::string{});
    v.prompt_text = j.value("prompt_text", std::string{});
    v.model_id = j.value("model_id", std::string{});
    if (j.contains("tier")) {
        auto t = tier_from_string(j.at("tier").get<std::string>());
        if (!t)
            throw std::invalid_argument("unknown tier: " +
                                        j.at("tier").get<std::string>());
        v.tier = *t;
    }
    v.media_uri = j.value("media_uri", std::string{});
    v.fps = j.value("fps", 0.0);
    v.duration_s = j.value("duration_s", 0.0);
    v.width = j.value("width", 0);
    v.height = j.value("height", 0);
    v.extra = detail::take_extra(
        j, {"video_id", "prompt_id", "prompt_text", "model_id", "tier",
            "media_uri", "fps", "duration_s", "width", "height"});
    return v;
}

inline json to_json(const AnnotationRecord& r) {
    json j = r.extra;
    j["video_id"] = r.video_id;
    j["annotator_id"] = r.annotator_id;
    j["scores"] = to_json(r.scores);
    json comments = json::object();
    for (Dimension d : kDimensions) {
        const auto& c = r.comments[dim_index(d)];
        if (c) comments[dimension_key(d)] = *c;
    }
    j["comments"] = comments;
    return j;
}

inline AnnotationRecord annotation_from_json(const json& j) {
    AnnotationRecord r;
    detail::require_field(j, "video_id");
    detail::require_field(j, "scores");
    r.video_id = j.at("video_id").get<std::string>();
    r.annotator_id = j.value("annotator_id", std::string{});
    r.scores = int_triple_from_json(j.at("scores"));
    if (j.contains("comments")) {
        const json& c = j.at("comments");
        for (Dimension d : kDimensions) {
            const char* key = dimension_key(d);
            if (c.contains(key) && !c.at(key).is_null())
                r.comments[dim_index(d)] = c.at(key).get<std::string>();
        }
    }
    r.extra =
        detail::take_extra(j, {"video_id", "annotator_id", "scores", "comments"});
    return r;
}

inline json to_json(const Judgment& jd) {
    json j = jd.extra;
    j["video_id"] = jd.video_id;
    j["raw_text"] = jd.raw_text;
    j["rationale"] = jd.rationale;
    if (jd.scores) j["scores"] = to_json(*jd.scores);
    if (jd.soft_scores) j["soft_scores"] = to_json(*jd.soft_scores);
    if (jd.token_dists) {
        json td = json::object();
        for (Dimension d : kDimensions)
            td[dimension_key(d)] = to_json((*jd.token_dists)[dim_index(d)]);
        j["token_dists"] = td;
    }
    if (jd.parse_failed) j["parse_failed"] = true;
    return j;
}

inline Judgment judgment_from_json(const json& j) {
    Judgment jd;
    detail::require_field(j, "video_id");
    jd.video_id = j.at("video_id").get<std::string>();
    jd.raw_text = j.value("raw_text", std::string{});
    jd.rationale = j.value("rationale", std::string{});
    if (j.contains("scores") && !j.at("scores").is_null())
        jd.scores = int_triple_from_json(j.at("scores"));
    if (j.contains("soft_scores") && !j.at("soft_scores").is_null())
        jd.soft_scores = float_triple_from_json(j.at("soft_scores"));
    if (j.contains("token_dists") && !j.at("token_dists").is_null()) {
        std::array<TokenScoreDistribution, 3> dists;
        for (Dimension d : kDimensions)
            dists[dim_index(d)] =
                token_dist_from_json(j.at("token_dists").at(dimension_key(d)));
        jd.token_dists = dists;
    }
    jd.parse_failed = j.value("parse_failed", false);
    jd.extra = detail::take_extra(
        j, {"video_id", "raw_text", "rationale", "scores", "soft_scores",
            "token_dists", "parse_failed"});
    return jd;
}

inline json to_json(const PreferencePair& p) {
    json j = p.extra;
    j["pair_id"] = p.pair_id;
    j["video_a"] = p.video_a;
    j["video_b"] = p.video_b;
    j["gt_label"] = pref_label_key(p.gt_label);
    j["dimension_scope"] = pref_scope_key(p.dimension_scope);
    return j;
}

inline PreferencePair pair_from_json(const json& j) {
    PreferencePair p;
    detail::require_field(j, "video_a");
    detail::require_field(j, "video_b");
    detail::require_field(j, "gt_label");
    p.pair_id = j.value("pair_id", std::string{});
    p.video_a = j.at("video_a").get<std::string>();
    p.video_b = j.at("video_b").get<std::string>();
    auto label = pref_label_from_string(j.at("gt_label").get<std::string>());
    if (!label)
        throw std::invalid_argument("unknown gt_label: " +
                                    j.at("gt_label").get<std::string>());
    p.gt_label = *label;
    if (j.contains("dimension_scope")) {
        auto s = pref_scope_from_string(j.at("dimension_scope").get<std::string>());
        if (!s)
            throw std::invalid_argument(
                "unknown dimension_scope: " +
                j.at("dimension_scope").get<std::string>());
        p.dimension_scope = *s;
    }
    p.extra = detail::take_extra(
        j, {"pair_id", "video_a", "video_b", "gt_label", "dimension_scope"});
    return p;
}

}  // namespace vs2
