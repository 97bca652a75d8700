#pragma once

// Scalar evaluation metrics: exact/relaxed accuracy, Pearson correlation,
// Krippendorff's alpha over incomplete rating matrices, relaxed-match
// inter-annotator agreement, and tie-aware preference accuracy.  Accuracies
// and correlations are reported as percentages.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <vs2/core.hpp>

namespace vs2 {

inline double exact_accuracy(const std::vector<int>& preds,
                             const std::vector<int>& gts) {
    if (preds.size() != gts.size())
        throw std::invalid_argument("exact_accuracy: length mismatch");
    if (preds.empty()) throw std::invalid_argument("exact_accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        if (preds[i] == gts[i]) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(preds.size());
}

inline double relaxed_accuracy(const std::vector<int>& preds,
                               const std::vector<int>& gts) {
    if (preds.size() != gts.size())
        throw std::invalid_argument("relaxed_accuracy: length mismatch");
    if (preds.empty()) throw std::invalid_argument("relaxed_accuracy: empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        if (std::abs(preds[i] - gts[i]) <= 1) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(preds.size());
}

// Pearson correlation x 100, population moments.
inline double plcc(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("plcc: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("plcc: need at least 2 points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cov += (x[i] - mx) * (y[i] - my);
        vx += (x[i] - mx) * (x[i] - mx);
        vy += (y[i] - my) * (y[i] - my);
    }
    if (vx == 0.0 || vy == 0.0)
        throw std::invalid_argument("plcc: undefined correlation for constant series");
    return 100.0 * cov / std::sqrt(vx * vy);
}

// ---------------------------------------------------------------------------
// Krippendorff's alpha

enum class AlphaLevel { Interval, Ordinal };

// Alpha over per-unit rating lists (annotator identity is irrelevant to the
// statistic).  Units with fewer than two ratings are skipped.  Uses the
// coincidence-matrix formulation: o_ck = sum_u (pairs of (c,k) in u)/(m_u-1),
// D_o = sum_{c != k} o_ck d2(c,k) / n, D_e = sum_{c != k} n_c n_k d2(c,k) /
// (n (n-1)).  Interval distance d2 = (c-k)^2; ordinal distance uses the
// cumulative value frequencies.  Returns 100 x (1 - D_o/D_e); exact 100 when
// observed disagreement is zero.
inline double krippendorff_alpha(const std::vector<std::vector<int>>& units,
                                 AlphaLevel level = AlphaLevel::Interval) {
    std::size_t pairable_units = 0;
    std::map<int, double> n_c;  // coincidence marginals = pooled value counts
    double n = 0.0;
    for (const auto& u : units) {
        if (u.size() < 2) continue;
        ++pairable_units;
        for (int v : u) {
            n_c[v] += 1.0;
            n += 1.0;
        }
    }
    if (pairable_units < 2)
        throw std::invalid_argument("krippendorff_alpha: insufficient pairable values");

    // Value index for dense matrices.
    std::vector<int> domain;
    for (const auto& [v, cnt] : n_c) domain.push_back(v);
    const std::size_t k = domain.size();
    std::map<int, std::size_t> index;
    for (std::size_t i = 0; i < k; ++i) index[domain[i]] = i;

    std::vector<double> coincidence(k * k, 0.0);
    for (const auto& u : units) {
        if (u.size() < 2) continue;
        const double denom = static_cast<double>(u.size() - 1);
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = 0; j < u.size(); ++j)
                if (i != j)
                    coincidence[index[u[i]] * k + index[u[j]]] += 1.0 / denom;
    }

    std::vector<double> d2(k * k, 0.0);
    if (level == AlphaLevel::Interval) {
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                double diff = domain[a] - domain[b];
                d2[a * k + b] = diff * diff;
            }
    } else {
        // Ordinal: distance between categories c<k is the count of ratings in
        // categories between them (inclusive), minus half the endpoints.
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                std::size_t lo = std::min(a, b), hi = std::max(a, b);
                double s = 0.0;
                for (std::size_t g = lo; g <= hi; ++g) s += n_c[domain[g]];
                s -= (n_c[domain[lo]] + n_c[domain[hi]]) / 2.0;
                d2[a * k + b] = s * s;
            }
    }

    double d_o = 0.0, d_e = 0.0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b) continue;
            d_o += coincidence[a * k + b] * d2[a * k + b];
            d_e += n_c[domain[a]] * n_c[domain[b]] * d2[a * k + b];
        }
    d_o /= n;
    d_e /= n * (n - 1.0);

    if (d_o == 0.0) return 100.0;  // perfect agreement, by definition
    return 100.0 * (1.0 - d_o / d_e);
}

// Adapter for annotator x item matrices with missing cells.
inline double krippendorff_alpha(
    const std::vector<std::vector<std::optional<int>>>& matrix,
    AlphaLevel level = AlphaLevel::Interval) {
    std::size_t items = 0;
    for (const auto& row : matrix) items = std::max(items, row.size());
    std::vector<std::vector<int>> units(items);
    for (const auto& row : matrix)
        for (std::size_t i = 0; i < row.size(); ++i)
            if (row[i]) units[i].push_back(*row[i]);
    return krippendorff_alpha(units, level);
}

// Fraction of items whose annotator scores all lie within one point.
inline double relaxed_match_iaa(const std::vector<std::vector<int>>& rows) {
    if (rows.empty()) throw std::invalid_argument("relaxed_match_iaa: empty input");
    std::size_t hits = 0;
    for (const auto& row : rows) {
        if (row.size() < 2)
            throw std::invalid_argument("relaxed_match_iaa: row with fewer than 2 scores");
        auto [mn, mx] = std::minmax_element(row.begin(), row.end());
        if (*mx - *mn <= 1) ++hits;
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(rows.size());
}

struct AgreementReport {
    double relaxed_match = 0.0;
    double alpha = 0.0;
    std::size_t n = 0;
};

inline AgreementReport agreement_report(const std::vector<std::vector<int>>& rows,
                                        AlphaLevel level = AlphaLevel::Interval) {
    AgreementReport r;
    r.n = rows.size();
    r.relaxed_match = relaxed_match_iaa(rows);
    r.alpha = krippendorff_alpha(rows, level);
    return r;
}

// ---------------------------------------------------------------------------
// Preference

// Tie when the scores are within margin_frac of the full score range
// (boundary inclusive); otherwise the higher side wins.
inline PrefLabel preference_from_scores(double score_a, double score_b,
                                        double scale_min, double scale_max,
                                        double margin_frac = 0.05) {
    if (!(scale_max > scale_min))
        throw std::invalid_argument("preference_from_scores: empty scale range");
    double margin = margin_frac * (scale_max - scale_min);
    if (std::abs(score_a - score_b) <= margin) return PrefLabel::Tie;
    return score_a > score_b ? PrefLabel::A : PrefLabel::B;
}

// include_ties=false restricts to pairs with a non-tie ground truth; a
// predicted Tie on such a pair counts as wrong.
inline double preference_accuracy(const std::vector<PrefLabel>& preds,
                                  const std::vector<PrefLabel>& gts,
                                  bool include_ties) {
    if (preds.size() != gts.size())
        throw std::invalid_argument("preference_accuracy: length mismatch");
    std::size_t n = 0, hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (!include_ties && gts[i] == PrefLabel::Tie) continue;
        ++n;
        if (preds[i] == gts[i]) ++hits;
    }
    if (n == 0) throw std::invalid_argument("preference_accuracy: no pairs to score");
    return 100.0 * static_cast<double>(hits) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Point-score report assembly

struct PointScoreReport {
    // Indexed by dimension; absent when the judged system lacks the dimension.
    std::array<std::optional<double>, 3> exact{};
    std::array<std::optional<double>, 3> relaxed{};
    std::array<std::optional<double>, 3> plcc_x100{};
    std::optional<double> exact_avg, relaxed_avg, plcc_avg;
    std::size_t n = 0;
};

namespace detail {
inline std::optional<double> mean_present(const std::array<std::optional<double>, 3>& xs) {
    double sum = 0.0;
    int count = 0;
    for (const auto& x : xs)
        if (x) {
            sum += *x;
            ++count;
        }
    if (count == 0) return std::nullopt;
    return sum / count;
}
}  // namespace detail

// Per-dimension series for a point-score evaluation: integer predictions for
// accuracies, raw (possibly soft) predictions for correlation.
struct DimSeries {
    std::vector<int> pred_int;
    std::vector<double> pred_raw;
    std::vector<int> gt;
};

inline PointScoreReport point_score_report(
    const std::array<std::optional<DimSeries>, 3>& dims) {
    PointScoreReport r;
    for (std::size_t d = 0; d < 3; ++d) {
        if (!dims[d]) continue;
        const DimSeries& s = *dims[d];
        if (s.pred_int.size() != s.gt.size() || s.pred_raw.size() != s.gt.size())
            throw std::invalid_argument("point_score_report: series length mismatch");
        r.n = std::max(r.n, s.gt.size());
        r.exact[d] = exact_accuracy(s.pred_int, s.gt);
        r.relaxed[d] = relaxed_accuracy(s.pred_int, s.gt);
        std::vector<double> gt_real(s.gt.begin(), s.gt.end());
        r.plcc_x100[d] = plcc(s.pred_raw, gt_real);
    }
    r.exact_avg = detail::mean_present(r.exact);
    r.relaxed_avg = detail::mean_present(r.relaxed);
    r.plcc_avg = detail::mean_present(r.plcc_x100);
    return r;
}

}  // namespace vs2
