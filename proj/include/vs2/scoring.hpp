#pragma once

// Judgment parsing and score computation: extracting (rationale, scores) from
// free-form judge output, the canonical rendering of a judgment, soft scores
// from token-level distributions, the wire query, and frame-timestamp
// sampling.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <vs2/core.hpp>
#include <vs2/templates.hpp>

namespace vs2 {

// ---------------------------------------------------------------------------
// Query construction

inline std::string build_query(const std::string& prompt_text) {
    if (prompt_text.empty())
        throw std::invalid_argument("build_query: empty prompt");
    return render_template(kQueryTemplate, {{"t2v_prompt", prompt_text}});
}

// ---------------------------------------------------------------------------
// Frame-timestamp sampling

// Timestamps t_k = k/fps for k = 0,1,... while t_k < duration_s, thinned to at
// most max_frames by keeping the first and last and evenly dropping interior
// frames.
inline std::vector<double> sample_frame_timestamps(double duration_s, double fps,
                                                   int max_frames = 1 << 20) {
    if (!(duration_s > 0.0))
        throw std::invalid_argument("sample_frame_timestamps: duration_s must be > 0");
    if (!(fps > 0.0))
        throw std::invalid_argument("sample_frame_timestamps: fps must be > 0");
    if (max_frames < 1)
        throw std::invalid_argument("sample_frame_timestamps: max_frames must be >= 1");
    std::vector<double> all;
    for (long long k = 0;; ++k) {
        double t = static_cast<double>(k) / fps;
        if (!(t < duration_s)) break;
        all.push_back(t);
    }
    const std::size_t n = all.size();
    const std::size_t m = static_cast<std::size_t>(max_frames);
    if (n <= m) return all;
    if (m == 1) return {all.front()};
    std::vector<double> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        // Evenly spaced index positions, endpoints pinned.
        double pos = static_cast<double>(i) * static_cast<double>(n - 1) /
                     static_cast<double>(m - 1);
        out.push_back(all[static_cast<std::size_t>(std::llround(pos))]);
    }
    return out;
}

struct FrameSamplingPlan {
    double fps = 2.0;
    int max_frames = 64;

    std::vector<double> timestamps(double duration_s) const {
        return sample_frame_timestamps(duration_s, fps, max_frames);
    }
};

// ---------------------------------------------------------------------------
// Judgment parsing

enum class ParseStatus { Ok, MissingScores, OutOfRange };

inline const char* parse_status_name(ParseStatus s) {
    switch (s) {
        case ParseStatus::Ok: return "ok";
        case ParseStatus::MissingScores: return "missing_scores";
        case ParseStatus::OutOfRange: return "out_of_range";
    }
    return "";
}

// Byte range [begin, end) of a score's digits inside the original raw text;
// used to line scores up with token-level log-probabilities.
struct ScoreSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    friend bool operator==(const ScoreSpan&, const ScoreSpan&) = default;
};

struct ParsedJudgment {
    ParseStatus status = ParseStatus::MissingScores;
    std::string rationale;          // contents of the first think-tag pair
    IntTriple scores;               // meaningful only when status == Ok
    std::array<long long, 3> raw_values{};  // as parsed, for diagnostics
    std::array<ScoreSpan, 3> spans{};       // digit positions in raw_text
    bool labeled = false;           // true when the label path matched
};

namespace detail {

inline bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Standalone digit runs in text[from..]: maximal runs whose neighbours are
// neither alphanumeric nor part of a decimal number ("2.5" yields nothing,
// "4." yields 4).
inline std::vector<ScoreSpan> standalone_integers(std::string_view text,
                                                  std::size_t from) {
    std::vector<ScoreSpan> runs;
    std::size_t i = from;
    const std::size_t n = text.size();
    while (i < n) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t b = i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t e = i;
        bool ok = (b == 0 || !is_word_char(text[b - 1])) &&
                  (e == n || !is_word_char(text[e]));
        // Exclude halves of decimal literals.
        if (ok && b >= 2 && text[b - 1] == '.' &&
            std::isdigit(static_cast<unsigned char>(text[b - 2])))
            ok = false;
        if (ok && e + 1 < n && text[e] == '.' &&
            std::isdigit(static_cast<unsigned char>(text[e + 1])))
            ok = false;
        if (ok) runs.push_back({b, e});
    }
    return runs;
}

inline long long parse_digits(std::string_view text, ScoreSpan span) {
    long long v = 0;
    for (std::size_t i = span.begin; i < span.end; ++i) {
        v = v * 10 + (text[i] - '0');
        if (v > 1000000) return v;  // plenty for range diagnostics
    }
    return v;
}

}  // namespace detail

// Extracts (rationale, scores) from free-form judge output.
//
// Rationale: contents of the first <think>...</think> pair; empty when the
// pair is absent.  Scores come from the text after the closing tag (or the
// whole text when there is no tag):
//   1. Label path — when all three dimension labels appear as whole words
//      (case-insensitive: "visual"; "alignment" or "text"; "physical" or
//      "common"), each
//      dimension's value is the first standalone integer after one of its
//      label occurrences, scanning no further than the next label occurrence.
//   2. Bare path — when no label appears at all, the first three standalone
//      integers are taken in (vq, ta, pc) order.
// Values outside 1-5 yield OutOfRange; unextractable values yield
// MissingScores (labels present but incomplete counts as missing).
inline ParsedJudgment parse_judgment(const std::string& raw_text) {
    ParsedJudgment out;

    std::size_t tail_start = 0;
    std::size_t open = raw_text.find("<think>");
    if (open != std::string::npos) {
        std::size_t close = raw_text.find("</think>", open + 7);
        if (close != std::string::npos) {
            out.rationale = raw_text.substr(open + 7, close - (open + 7));
            tail_start = close + 8;
        }
    }

    std::string lower(raw_text);
    for (char& c : lower)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');

    static const std::array<std::vector<std::string_view>, 3> kLabels = {
        std::vector<std::string_view>{"visual"},
        std::vector<std::string_view>{"alignment", "text"},
        std::vector<std::string_view>{"physical", "common"}};

    // Every label occurrence in the tail, across all dimensions.
    struct Occurrence {
        std::size_t pos;
        std::size_t end;
        std::size_t dim;
    };
    std::vector<Occurrence> occ;
    for (std::size_t d = 0; d < 3; ++d) {
        for (std::string_view kw : kLabels[d]) {
            std::size_t p = tail_start;
            while ((p = lower.find(kw, p)) != std::string::npos) {
                // Whole-word occurrences only, so e.g. "context" does not
                // register as the text-alignment label.
                bool left_ok = p == 0 || !detail::is_word_char(lower[p - 1]);
                std::size_t e = p + kw.size();
                bool right_ok = e == lower.size() || !detail::is_word_char(lower[e]);
                if (left_ok && right_ok) occ.push_back({p, e, d});
                p += 1;
            }
        }
    }
    std::sort(occ.begin(), occ.end(),
              [](const Occurrence& a, const Occurrence& b) { return a.pos < b.pos; });

    bool have_dim[3] = {false, false, false};
    for (const auto& o : occ) have_dim[o.dim] = true;

    const bool all_labels = have_dim[0] && have_dim[1] && have_dim[2];
    const bool any_label = have_dim[0] || have_dim[1] || have_dim[2];

    std::array<std::optional<ScoreSpan>, 3> found;
    if (all_labels) {
        out.labeled = true;
        for (std::size_t i = 0; i < occ.size(); ++i) {
            const auto& o = occ[i];
            if (found[o.dim]) continue;
            // Scan for an integer between this occurrence and the next label
            // occurrence (of any dimension) that starts after it ends.
            std::size_t bound = lower.size();
            for (std::size_t j = i + 1; j < occ.size(); ++j) {
                if (occ[j].pos >= o.end) {
                    bound = occ[j].pos;
                    break;
                }
            }
            auto runs = detail::standalone_integers(
                std::string_view(lower).substr(0, bound), o.end);
            if (!runs.empty()) found[o.dim] = runs.front();
        }
        for (std::size_t d = 0; d < 3; ++d) {
            if (!found[d]) {
                out.status = ParseStatus::MissingScores;
                return out;
            }
        }
    } else if (!any_label) {
        auto runs = detail::standalone_integers(lower, tail_start);
        if (runs.size() < 3) {
            out.status = ParseStatus::MissingScores;
            return out;
        }
        for (std::size_t d = 0; d < 3; ++d) found[d] = runs[d];
    } else {
        out.status = ParseStatus::MissingScores;
        return out;
    }

    bool in_range = true;
    for (std::size_t d = 0; d < 3; ++d) {
        out.spans[d] = *found[d];
        out.raw_values[d] = detail::parse_digits(raw_text, *found[d]);
        if (out.raw_values[d] < 1 || out.raw_values[d] > 5) in_range = false;
    }
    if (!in_range) {
        out.status = ParseStatus::OutOfRange;
        return out;
    }
    out.scores = IntTriple{static_cast<int>(out.raw_values[0]),
                           static_cast<int>(out.raw_values[1]),
                           static_cast<int>(out.raw_values[2])};
    out.status = ParseStatus::Ok;
    return out;
}

// Canonical textual form; parse_judgment is an exact inverse on its output
// (for rationales that do not themselves contain a closing think tag).
inline std::string render_judgment(const std::string& rationale,
                                   const IntTriple& scores) {
    return "<think>" + rationale + "</think> visual quality: " +
           std::to_string(scores.vq) +
           ", text alignment: " + std::to_string(scores.ta) +
           ", physical consistency: " + std::to_string(scores.pc);
}

// ---------------------------------------------------------------------------
// Soft scores

enum class SoftScoreMode { AsWritten, Expectation };

inline const char* soft_score_mode_name(SoftScoreMode m) {
    return m == SoftScoreMode::AsWritten ? "as_written" : "expectation";
}

inline std::optional<SoftScoreMode> soft_score_mode_from_string(std::string_view s) {
    if (s == "as_written" || s == "as-written") return SoftScoreMode::AsWritten;
    if (s == "expectation") return SoftScoreMode::Expectation;
    return std::nullopt;
}

// Soft score from an (unnormalized) token distribution.  With q(s) the
// normalized weight:
//   AsWritten:   s* . q(s*) with s* the argmax (ties toward the larger
//                score), clamped into [1, 5];
//   Expectation: sum_s s . q(s), always in [1, 5].
// Both are invariant under uniform scaling of the weights.
inline double soft_score(const TokenScoreDistribution& dist, SoftScoreMode mode) {
    if (!dist.valid())
        throw std::invalid_argument("soft_score: distribution has no positive mass");
    const double total = dist.total();
    if (mode == SoftScoreMode::AsWritten) {
        int best = 1;
        for (int s = 2; s <= 5; ++s)
            if (dist.weight(s) >= dist.weight(best)) best = s;
        double y = best * (dist.weight(best) / total);
        return std::clamp(y, 1.0, 5.0);
    }
    double y = 0.0;
    for (int s = 1; s <= 5; ++s) y += s * (dist.weight(s) / total);
    return y;
}

inline FloatTriple soft_triple(const std::array<TokenScoreDistribution, 3>& dists,
                               SoftScoreMode mode) {
    FloatTriple t;
    for (Dimension d : kDimensions)
        t.at(d) = soft_score(dists[dim_index(d)], mode);
    return t;
}

}  // namespace vs2
