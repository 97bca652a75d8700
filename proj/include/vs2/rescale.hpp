#pragma once

// Adapters that map heterogeneous baseline score spaces onto the
// three-dimension 1-5 convention: linear and Gaussian-quantile rescaling, the
// MJ-Bench ordinal table, dimension-mapping rules, and the named per-baseline
// spec registry (also shipped as assets/rescale_specs.json).

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <vs2/core.hpp>
#include <vs2/jsonl.hpp>
#include <vs2/rng.hpp>

namespace vs2 {

// ---------------------------------------------------------------------------
// Standard normal quantile

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Inverse standard normal CDF: Acklam's rational approximation refined by one
// Halley step against erfc, accurate to well under 1e-10 over (0, 1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must lie in (0, 1)");

    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley refinement step.
    double e = normal_cdf(x) - p;
    double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

// ---------------------------------------------------------------------------
// Rescale methods

// Clamp into [src_min, src_max], map affinely onto [1, 5], round half away.
inline int linear_rescale(double x, double src_min, double src_max) {
    if (!(src_max > src_min))
        throw std::invalid_argument("linear_rescale: src_max must exceed src_min");
    double clamped = std::min(std::max(x, src_min), src_max);
    double y = 1.0 + 4.0 * (clamped - src_min) / (src_max - src_min);
    return round_half_away(y);
}

// Quantile thresholds of the standard normal at 20/40/60/80%.
inline const std::array<double, 4>& gaussian_thresholds() {
    static const std::array<double, 4> t = {
        normal_quantile(0.2), normal_quantile(0.4), normal_quantile(0.6),
        normal_quantile(0.8)};
    return t;
}

// Ordinal category via normal quantiles, strict on each upper bound:
// 1 if z/sigma < q(0.2), 2 if < q(0.4), 3 if < q(0.6), 4 if < q(0.8), else 5.
inline int gaussian_quantile_rescale(double z, double sigma = 1.0) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian_quantile_rescale: sigma must be > 0");
    double u = z / sigma;
    const auto& t = gaussian_thresholds();
    if (u < t[0]) return 1;
    if (u < t[1]) return 2;
    if (u < t[2]) return 3;
    if (u < t[3]) return 4;
    return 5;
}

// No rescaling: used for baselines already on the 1-5 scale.  Rounds (so that
// averaged customized dimensions like 3.5 resolve) and validates the range.
inline int identity_rescale(double x) {
    int v = round_half_away(x);
    if (!is_valid_score(v))
        throw std::out_of_range("identity rescale input outside 1-5: " +
                                std::to_string(x));
    return v;
}

// ---------------------------------------------------------------------------
// MJ-Bench ordinal mapping onto {0,1,2}

// vq: {1,2}->0, {3,4}->1, {5}->2; ta and pc: {1}->0, {2,3}->1, {4,5}->2.
inline std::array<int, 3> mj_bench_map(int x_vq, int x_ta, int x_pc) {
    for (int v : {x_vq, x_ta, x_pc})
        if (!is_valid_score(v))
            throw std::out_of_range("mj_bench_map: input outside 1-5");
    auto v = [](int x) { return x <= 2 ? 0 : (x <= 4 ? 1 : 2); };
    auto tp = [](int x) { return x == 1 ? 0 : (x <= 3 ? 1 : 2); };
    return {v(x_vq), tp(x_ta), tp(x_pc)};
}

// ---------------------------------------------------------------------------
// Rescale specs

struct RescaleSpec {
    enum class Method { Identity, Linear, GaussianQuantile };
    enum class Mapping { Broadcast, GoodMatch, Customized };

    Method method = Method::Identity;
    double src_min = 1.0;   // Linear only
    double src_max = 5.0;   // Linear only
    double sigma = 1.0;     // GaussianQuantile only
    Mapping mapping = Mapping::Broadcast;
    std::string rule;       // Customized only: videoreward | aigve_macs | videophy2

    friend bool operator==(const RescaleSpec&, const RescaleSpec&) = default;
};

namespace detail {

inline double require_number(const json& native, const char* field) {
    if (!native.contains(field))
        throw std::invalid_argument(std::string("missing native field: ") + field);
    return native.at(field).get<double>();
}

}  // namespace detail

// Applies the spec's dimension-mapping rule to a native score object,
// producing raw per-dimension values; dimensions the rule does not cover stay
// absent.
inline std::array<std::optional<double>, 3> map_dimensions(const json& native,
                                                           const RescaleSpec& spec) {
    using detail::require_number;
    std::array<std::optional<double>, 3> out;
    switch (spec.mapping) {
        case RescaleSpec::Mapping::Broadcast: {
            double s = require_number(native, "score");
            out = {s, s, s};
            break;
        }
        case RescaleSpec::Mapping::GoodMatch: {
            out[0] = require_number(native, "vq");
            out[1] = require_number(native, "ta");
            out[2] = require_number(native, "pc");
            break;
        }
        case RescaleSpec::Mapping::Customized: {
            if (spec.rule == "videoreward") {
                out[0] = require_number(native, "VQ");
                out[1] = require_number(native, "TA");
                // Motion quality is dropped; pc stays absent.
            } else if (spec.rule == "aigve_macs") {
                out[0] = (require_number(native, "technical") +
                          require_number(native, "element") +
                          require_number(native, "action")) /
                         3.0;
                out[1] = (require_number(native, "element_presence") +
                          require_number(native, "action_presence")) /
                         2.0;
                out[2] = require_number(native, "physics");
            } else if (spec.rule == "videophy2") {
                out[1] = require_number(native, "SA");
                out[2] = require_number(native, "PC");
            } else {
                throw std::invalid_argument("unknown customized rule: " + spec.rule);
            }
            break;
        }
    }
    return out;
}

inline int apply_rescale_method(double x, const RescaleSpec& spec) {
    switch (spec.method) {
        case RescaleSpec::Method::Identity: return identity_rescale(x);
        case RescaleSpec::Method::Linear:
            return linear_rescale(x, spec.src_min, spec.src_max);
        case RescaleSpec::Method::GaussianQuantile:
            return gaussian_quantile_rescale(x, spec.sigma);
    }
    throw std::logic_error("unreachable");
}

// map_dimensions followed by the per-dimension score method.
inline std::array<std::optional<int>, 3> rescale_native(const json& native,
                                                        const RescaleSpec& spec) {
    auto mapped = map_dimensions(native, spec);
    std::array<std::optional<int>, 3> out;
    for (std::size_t d = 0; d < 3; ++d)
        if (mapped[d]) out[d] = apply_rescale_method(*mapped[d], spec);
    return out;
}

// ---------------------------------------------------------------------------
// Spec registry and serialization

inline json to_json(const RescaleSpec& s) {
    json j = json::object();
    switch (s.method) {
        case RescaleSpec::Method::Identity: j["method"] = "identity"; break;
        case RescaleSpec::Method::Linear:
            j["method"] = "linear";
            j["src_min"] = s.src_min;
            j["src_max"] = s.src_max;
            break;
        case RescaleSpec::Method::GaussianQuantile:
            j["method"] = "gaussian_quantile";
            j["sigma"] = s.sigma;
            break;
    }
    switch (s.mapping) {
        case RescaleSpec::Mapping::Broadcast: j["mapping"] = "broadcast"; break;
        case RescaleSpec::Mapping::GoodMatch: j["mapping"] = "good_match"; break;
        case RescaleSpec::Mapping::Customized:
            j["mapping"] = "customized";
            j["rule"] = s.rule;
            break;
    }
    return j;
}

inline RescaleSpec rescale_spec_from_json(const json& j) {
    RescaleSpec s;
    std::string method = j.at("method").get<std::string>();
    if (method == "identity") {
        s.method = RescaleSpec::Method::Identity;
    } else if (method == "linear") {
        s.method = RescaleSpec::Method::Linear;
        s.src_min = j.at("src_min").get<double>();
        s.src_max = j.at("src_max").get<double>();
        if (!(s.src_max > s.src_min))
            throw std::invalid_argument("rescale spec: src_max must exceed src_min");
    } else if (method == "gaussian_quantile") {
        s.method = RescaleSpec::Method::GaussianQuantile;
        s.sigma = j.at("sigma").get<double>();
        if (!(s.sigma > 0.0))
            throw std::invalid_argument("rescale spec: sigma must be > 0");
    } else {
        throw std::invalid_argument("unknown rescale method: " + method);
    }
    std::string mapping = j.at("mapping").get<std::string>();
    if (mapping == "broadcast") {
        s.mapping = RescaleSpec::Mapping::Broadcast;
    } else if (mapping == "good_match") {
        s.mapping = RescaleSpec::Mapping::GoodMatch;
    } else if (mapping == "customized") {
        s.mapping = RescaleSpec::Mapping::Customized;
        s.rule = j.at("rule").get<std::string>();
    } else {
        throw std::invalid_argument("unknown dim mapping: " + mapping);
    }
    return s;
}

// Built-in per-baseline registry.
inline const std::map<std::string, RescaleSpec>& builtin_rescale_specs() {
    static const std::map<std::string, RescaleSpec> specs = [] {
        using M = RescaleSpec::Method;
        using D = RescaleSpec::Mapping;
        std::map<std::string, RescaleSpec> m;
        m["imagereward"] = {M::GaussianQuantile, 1, 5, 1.0, D::Broadcast, ""};
        m["deqa_score"] = {M::Linear, 0.0, 5.0, 1.0, D::Broadcast, ""};
        m["q_insight"] = {M::Linear, 1.0, 5.0, 1.0, D::GoodMatch, ""};
        m["videoreward"] = {M::GaussianQuantile, 1, 5, 1.5, D::Customized, "videoreward"};
        m["unifiedreward"] = {M::Identity, 1, 5, 1.0, D::GoodMatch, ""};
        m["visionreward"] = {M::GaussianQuantile, 1, 5, 1.0, D::Broadcast, ""};
        m["q_align"] = {M::Linear, 0.0, 1.0, 1.0, D::Broadcast, ""};
        m["aigve_macs"] = {M::Identity, 1, 5, 1.0, D::Customized, "aigve_macs"};
        m["videophy2"] = {M::Identity, 1, 5, 1.0, D::Customized, "videophy2"};
        m["dover"] = {M::Linear, 0.0, 1.0, 1.0, D::Broadcast, ""};
        return m;
    }();
    return specs;
}

inline std::map<std::string, RescaleSpec> load_rescale_specs(const std::string& path) {
    json j = json::parse(read_file(path));
    std::map<std::string, RescaleSpec> out;
    for (auto it = j.begin(); it != j.end(); ++it)
        out[it.key()] = rescale_spec_from_json(it.value());
    return out;
}

// ---------------------------------------------------------------------------
// Preference pairs derived from scalar ground-truth scores

// Samples n_pairs distinct unordered pairs of entries (seeded), labeling each
// by score comparison; exactly equal scores give Tie.
inline std::vector<PreferencePair> derive_pairs_from_scores(
    const std::vector<std::pair<std::string, double>>& entries, std::size_t n_pairs,
    std::uint64_t seed) {
    if (entries.size() < 2)
        throw std::invalid_argument("derive_pairs_from_scores: need at least 2 entries");
    const std::size_t n = entries.size();
    const std::size_t total = n * (n - 1) / 2;
    if (n_pairs > total)
        throw std::invalid_argument(
            "derive_pairs_from_scores: n_pairs exceeds available distinct pairs");
    Rng rng(seed);
    auto picks = sample_without_replacement(total, n_pairs, rng);
    std::vector<PreferencePair> out;
    out.reserve(n_pairs);
    for (std::size_t flat : picks) {
        // Unrank the flat index into (i, j), i < j, row-major over the upper
        // triangle.
        std::size_t i = 0;
        std::size_t remaining = flat;
        std::size_t row_len = n - 1;
        while (remaining >= row_len) {
            remaining -= row_len;
            ++i;
            --row_len;
        }
        std::size_t jdx = i + 1 + remaining;
        PreferencePair p;
        p.pair_id = "pair-" + std::to_string(out.size());
        p.video_a = entries[i].first;
        p.video_b = entries[jdx].first;
        double sa = entries[i].second, sb = entries[jdx].second;
        p.gt_label = sa == sb ? PrefLabel::Tie : (sa > sb ? PrefLabel::A : PrefLabel::B);
        p.dimension_scope = PrefScope::Overall;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace vs2
