#pragma once

// Subcommand implementations behind the command-line tool.  Each command is
// an ordinary function over file paths plus a RunConfig, so tests drive them
// directly.  Exit codes: 0 = clean, 1 = completed with recorded errors
// (malformed lines, parse failures, endpoint aborts); fatal misuse (missing
// files, bad joins, unknown specs) throws and the binary maps it to 2.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <vs2/bon.hpp>
#include <vs2/core.hpp>
#include <vs2/jsonl.hpp>
#include <vs2/judge_client.hpp>
#include <vs2/metrics.hpp>
#include <vs2/pipeline.hpp>
#include <vs2/report.hpp>
#include <vs2/rescale.hpp>
#include <vs2/reward.hpp>
#include <vs2/rng.hpp>
#include <vs2/scoring.hpp>

namespace vs2 {

// ---------------------------------------------------------------------------
// Run configuration: defaults < config file < flags

struct RunConfig {
    std::uint64_t seed = 0;
    double fps = 2.0;
    int max_frames = 64;
    SoftScoreMode score_mode = SoftScoreMode::AsWritten;
    double lambda = 0.3;
    int jobs = 1;
    ReportFormat format = ReportFormat::Table;
    EndpointConfig endpoint;

    FrameSamplingPlan frame_plan() const { return {fps, max_frames}; }

    // Embedded in every report for provenance.  The API key never appears.
    json snapshot() const {
        return {{"seed", seed},
                {"fps", fps},
                {"max_frames", max_frames},
                {"score_mode", soft_score_mode_name(score_mode)},
                {"lambda", lambda},
                {"jobs", jobs},
                {"format", report_format_name(format)},
                {"endpoint",
                 {{"base_url", endpoint.base_url},
                  {"model_name", endpoint.model_name},
                  {"temperature", endpoint.temperature},
                  {"max_concurrent", endpoint.max_concurrent},
                  {"retry_limit", endpoint.retry_limit},
                  {"request_logprobs", endpoint.request_logprobs},
                  {"top_logprobs", endpoint.top_logprobs}}}};
    }
};

// Overlays config-file keys onto cfg; unknown keys are fatal to catch typos.
inline void apply_config_json(RunConfig& cfg, const json& j) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (key == "seed") {
            cfg.seed = v.get<std::uint64_t>();
        } else if (key == "fps") {
            cfg.fps = v.get<double>();
        } else if (key == "max_frames") {
            cfg.max_frames = v.get<int>();
        } else if (key == "score_mode") {
            auto m = soft_score_mode_from_string(v.get<std::string>());
            if (!m)
                throw std::invalid_argument("config: unknown score_mode: " +
                                            v.get<std::string>());
            cfg.score_mode = *m;
        } else if (key == "lambda") {
            cfg.lambda = v.get<double>();
        } else if (key == "jobs") {
            cfg.jobs = v.get<int>();
        } else if (key == "format") {
            auto f = report_format_from_string(v.get<std::string>());
            if (!f)
                throw std::invalid_argument("config: unknown format: " +
                                            v.get<std::string>());
            cfg.format = *f;
        } else if (key == "endpoint") {
            for (auto eit = v.begin(); eit != v.end(); ++eit) {
                const std::string& ek = eit.key();
                const json& ev = eit.value();
                if (ek == "base_url") cfg.endpoint.base_url = ev.get<std::string>();
                else if (ek == "model_name")
                    cfg.endpoint.model_name = ev.get<std::string>();
                else if (ek == "temperature")
                    cfg.endpoint.temperature = ev.get<double>();
                else if (ek == "max_concurrent")
                    cfg.endpoint.max_concurrent = ev.get<int>();
                else if (ek == "retry_limit")
                    cfg.endpoint.retry_limit = ev.get<int>();
                else if (ek == "request_logprobs")
                    cfg.endpoint.request_logprobs = ev.get<bool>();
                else if (ek == "top_logprobs")
                    cfg.endpoint.top_logprobs = ev.get<int>();
                else if (ek == "backoff_base_ms")
                    cfg.endpoint.backoff_base_ms = ev.get<double>();
                else if (ek == "timeout_s")
                    cfg.endpoint.timeout_s = ev.get<double>();
                else
                    throw std::invalid_argument("config: unknown endpoint key: " + ek);
            }
        } else {
            throw std::invalid_argument("config: unknown key: " + key);
        }
    }
}

// Defaults, then the optional config file, then VS2_* env for the endpoint.
// Flag overrides are applied by the binary after this.
inline RunConfig make_run_config(const std::optional<std::string>& config_path) {
    RunConfig cfg;
    if (config_path) apply_config_json(cfg, json::parse(read_file(*config_path)));
    apply_endpoint_env(cfg.endpoint);
    return cfg;
}

namespace detail {

inline std::string join_ids(const std::vector<std::string>& ids, std::size_t cap = 10) {
    std::string out;
    for (std::size_t i = 0; i < ids.size() && i < cap; ++i) {
        if (i) out += ", ";
        out += ids[i];
    }
    if (ids.size() > cap) out += ", … (" + std::to_string(ids.size()) + " total)";
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// filter-prompts

struct FilterPromptsArgs {
    std::string in;
    std::string out;
    std::string audit;
};

// Rule-stage filtering: every candidate gets one audit verdict; kept
// candidates are echoed to the output.  Malformed lines become audit error
// records and force a nonzero exit without stopping the run.
inline int cmd_filter_prompts(const FilterPromptsArgs& args, const RunConfig&,
                              std::ostream& log) {
    std::vector<JsonlError> line_errors;
    auto rows = read_jsonl_lenient(args.in, &line_errors);

    AtomicWriter out(args.out);
    AtomicWriter audit(args.audit);
    for (const auto& e : line_errors)
        audit.write_line(
            {{"verdict", "error"}, {"line_no", e.line_no}, {"error", e.message}});

    std::size_t bad = line_errors.size(), kept = 0;
    for (const auto& row : rows) {
        try {
            PromptCandidate cand = prompt_candidate_from_json(row);
            FilterVerdict verdict = filter_prompt(cand);
            audit.write_line(filter_audit_record(cand, verdict));
            if (verdict.keep) {
                out.write_line(to_json(cand));
                ++kept;
            }
        } catch (const std::exception& e) {
            audit.write_line({{"verdict", "error"}, {"error", e.what()}, {"row", row}});
            ++bad;
        }
    }
    out.commit();
    audit.commit();
    log << "filter-prompts: " << kept << " kept, " << rows.size() - kept + bad
        << " rejected or invalid of " << rows.size() + line_errors.size() << "\n";
    return bad == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// judge

struct JudgeArgs {
    std::string videos;
    std::string out;
};

// One judgment row per video.  Rerunning with an existing output only
// fetches what is missing; endpoint failures abort but keep completed rows.
inline int cmd_judge(const JudgeArgs& args, const RunConfig& cfg, std::ostream& log) {
    std::vector<VideoEntry> entries;
    for (const auto& row : read_jsonl(args.videos))
        entries.push_back(video_entry_from_json(row));

    std::set<std::string> done;
    std::vector<json> existing;
    if (std::filesystem::exists(args.out)) {
        for (const auto& row : read_jsonl(args.out)) {
            done.insert(row.at("video_id").get<std::string>());
            existing.push_back(row);
        }
    }

    EndpointConfig ep = cfg.endpoint;
    apply_endpoint_env(ep);
    if (ep.max_concurrent < cfg.jobs) ep.max_concurrent = cfg.jobs;
    JudgeClient client(ep);
    BatchResult result = client.judge_batch(entries, cfg.frame_plan(), done);

    std::size_t parse_failures = 0;
    AtomicWriter out(args.out);
    for (const auto& row : existing) out.write_line(row);
    for (Judgment& row : result.rows) {
        if (row.token_dists)
            row.soft_scores = soft_triple(*row.token_dists, cfg.score_mode);
        if (row.parse_failed) ++parse_failures;
        out.write_line(to_json(row));
    }
    out.commit();

    log << "judge: " << result.rows.size() << " new rows, " << done.size()
        << " resumed, " << parse_failures << " parse failures\n";
    if (result.error) {
        log << "judge: aborted on endpoint error: " << *result.error << "\n";
        return 1;
    }
    return parse_failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// eval-pointscore

struct EvalPointscoreArgs {
    std::string judgments;
    std::string ground_truth;
    std::string out;
    bool allow_partial = false;
    std::optional<double> min_coverage;  // percent; default 100, or 0 with allow_partial
    bool use_int_scores = false;
};

namespace detail {

// Per-row prediction values: ints for the accuracy metrics, raw (soft when
// float mode) for correlation.
struct PredPair {
    IntTriple rounded;
    FloatTriple raw;
};

inline std::optional<PredPair> prediction_values(const Judgment& j, bool use_int) {
    if (!use_int && j.soft_scores)
        return PredPair{round_triple(*j.soft_scores), *j.soft_scores};
    if (j.scores)
        return PredPair{*j.scores,
                        FloatTriple{static_cast<double>(j.scores->vq),
                                    static_cast<double>(j.scores->ta),
                                    static_cast<double>(j.scores->pc)}};
    return std::nullopt;
}

}  // namespace detail

inline int cmd_eval_pointscore(const EvalPointscoreArgs& args, const RunConfig& cfg,
                               std::ostream& log) {
    std::map<std::string, Judgment> judged;
    for (const auto& row : read_jsonl(args.judgments)) {
        Judgment j = judgment_from_json(row);
        judged[j.video_id] = std::move(j);
    }

    std::array<DimSeries, 3> dims;
    std::vector<std::string> missing;
    std::size_t total = 0;
    for (const auto& row : read_jsonl(args.ground_truth)) {
        detail::require_field(row, "video_id");
        std::string vid = row.at("video_id").get<std::string>();
        IntTriple gt = int_triple_from_json(row);
        ++total;
        auto it = judged.find(vid);
        std::optional<detail::PredPair> pred;
        if (it != judged.end())
            pred = detail::prediction_values(it->second, args.use_int_scores);
        if (!pred) {
            missing.push_back(vid);
            continue;
        }
        for (std::size_t d = 0; d < 3; ++d) {
            Dimension dim = kDimensions[d];
            dims[d].pred_int.push_back(pred->rounded.at(dim));
            dims[d].pred_raw.push_back(pred->raw.at(dim));
            dims[d].gt.push_back(gt.at(dim));
        }
    }
    if (total == 0) throw std::runtime_error("eval-pointscore: empty ground truth");

    if (!missing.empty()) {
        log << "eval-pointscore: " << missing.size()
            << " ground-truth rows without usable judgments: "
            << detail::join_ids(missing) << "\n";
        if (!args.allow_partial)
            throw std::runtime_error("unmatched video_ids: " +
                                     detail::join_ids(missing));
    }
    double coverage =
        100.0 * static_cast<double>(total - missing.size()) / static_cast<double>(total);
    double need = args.min_coverage.value_or(args.allow_partial ? 0.0 : 100.0);
    if (coverage < need)
        throw std::runtime_error("coverage " + fmt2(coverage) + "% below required " +
                                 fmt2(need) + "%");

    std::array<std::optional<DimSeries>, 3> series;
    for (std::size_t d = 0; d < 3; ++d) series[d] = dims[d];
    PointScoreReport report = point_score_report(series);

    json cfg_snapshot = cfg.snapshot();
    cfg_snapshot["scores"] = args.use_int_scores ? "int" : "float";
    Provenance prov =
        make_provenance(cfg_snapshot, {args.judgments, args.ground_truth});
    write_file_atomic(args.out, render_report(pointscore_table(report), prov,
                                              cfg.format, pointscore_json(report)));
    log << "eval-pointscore: " << report.n << " videos scored\n";
    return 0;
}

// ---------------------------------------------------------------------------
// eval-preference

struct EvalPreferenceArgs {
    std::string pairs;
    std::string judgments;
    std::string out;
    double margin_frac = 0.05;
    double scale_min = 1.0;
    double scale_max = 5.0;
    bool use_int_scores = false;
};

inline int cmd_eval_preference(const EvalPreferenceArgs& args, const RunConfig& cfg,
                               std::ostream& log) {
    std::map<std::string, Judgment> judged;
    for (const auto& row : read_jsonl(args.judgments)) {
        Judgment j = judgment_from_json(row);
        judged[j.video_id] = std::move(j);
    }

    // Scope-aware per-video score: one dimension, or the mean for "overall".
    auto score_of = [&](const Judgment& j, PrefScope scope) -> double {
        auto pred = detail::prediction_values(j, args.use_int_scores);
        if (!pred) throw std::runtime_error("no scores for video " + j.video_id);
        const FloatTriple& t = pred->raw;
        switch (scope) {
            case PrefScope::VisualQuality: return t.vq;
            case PrefScope::TextAlignment: return t.ta;
            case PrefScope::PhysicalConsistency: return t.pc;
            case PrefScope::Overall: return (t.vq + t.ta + t.pc) / 3.0;
        }
        throw std::logic_error("unreachable");
    };

    struct ScopeBucket {
        std::vector<PrefLabel> preds, gts;
    };
    std::map<std::string, ScopeBucket> buckets;
    std::vector<std::string> scope_order;
    std::vector<std::string> missing_pairs;

    std::vector<PreferencePair> pairs;
    for (const auto& row : read_jsonl(args.pairs))
        pairs.push_back(pair_from_json(row));
    for (const auto& p : pairs) {
        auto a = judged.find(p.video_a);
        auto b = judged.find(p.video_b);
        bool usable =
            a != judged.end() && b != judged.end() &&
            detail::prediction_values(a->second, args.use_int_scores).has_value() &&
            detail::prediction_values(b->second, args.use_int_scores).has_value();
        if (!usable) {
            missing_pairs.push_back(p.pair_id);
            continue;
        }
        PrefLabel pred = preference_from_scores(
            score_of(a->second, p.dimension_scope),
            score_of(b->second, p.dimension_scope), args.scale_min, args.scale_max,
            args.margin_frac);
        std::string scope = pref_scope_key(p.dimension_scope);
        auto [it, fresh] = buckets.try_emplace(scope);
        if (fresh) scope_order.push_back(scope);
        it->second.preds.push_back(pred);
        it->second.gts.push_back(p.gt_label);
    }
    if (!missing_pairs.empty())
        throw std::runtime_error("pairs without judgments: " +
                                 detail::join_ids(missing_pairs));
    if (pairs.empty()) throw std::runtime_error("eval-preference: no pairs");

    std::vector<PreferenceScopeResult> results;
    for (const auto& scope : scope_order) {
        const ScopeBucket& b = buckets.at(scope);
        PreferenceScopeResult r;
        r.scope = scope;
        r.n = b.preds.size();
        for (PrefLabel g : b.gts)
            if (g == PrefLabel::Tie) ++r.n_gt_ties;
        r.acc_with_ties = preference_accuracy(b.preds, b.gts, true);
        if (r.n_gt_ties < r.n)
            r.acc_without_ties = preference_accuracy(b.preds, b.gts, false);
        results.push_back(r);
    }

    json cfg_snapshot = cfg.snapshot();
    cfg_snapshot["margin_frac"] = args.margin_frac;
    cfg_snapshot["scale"] = {args.scale_min, args.scale_max};
    Provenance prov = make_provenance(cfg_snapshot, {args.pairs, args.judgments});
    write_file_atomic(args.out, render_report(preference_table(results), prov,
                                              cfg.format, preference_json(results)));
    log << "eval-preference: " << pairs.size() << " pairs over " << results.size()
        << " scopes\n";
    return 0;
}

// ---------------------------------------------------------------------------
// rescale

struct RescaleArgs {
    std::string native;
    std::string out;
    std::string spec_name;
    std::string specs_path;  // optional override of the builtin registry
};

inline int cmd_rescale(const RescaleArgs& args, const RunConfig&, std::ostream& log) {
    std::map<std::string, RescaleSpec> specs = args.specs_path.empty()
                                                   ? builtin_rescale_specs()
                                                   : load_rescale_specs(args.specs_path);
    auto it = specs.find(args.spec_name);
    if (it == specs.end()) {
        std::string avail;
        for (const auto& [name, spec] : specs) {
            if (!avail.empty()) avail += ", ";
            avail += name;
        }
        throw std::runtime_error("unknown rescale spec '" + args.spec_name +
                                 "'; available: " + avail);
    }

    AtomicWriter out(args.out);
    std::size_t n = 0;
    for (const auto& row : read_jsonl(args.native)) {
        detail::require_field(row, "video_id");
        auto rescaled = rescale_native(row, it->second);
        json out_row = row;
        for (std::size_t d = 0; d < 3; ++d)
            if (rescaled[d]) out_row[dimension_key(kDimensions[d])] = *rescaled[d];
        out.write_line(out_row);
        ++n;
    }
    out.commit();
    log << "rescale: " << n << " rows under spec '" << args.spec_name << "'\n";
    return 0;
}

// ---------------------------------------------------------------------------
// reward

struct RewardArgs {
    std::string judgments;
    std::string ground_truth;
    std::string out;
    int group_size = 8;  // expected rollouts per group; deviations warn
};

inline int cmd_reward(const RewardArgs& args, const RunConfig& cfg, std::ostream& log) {
    std::map<std::string, IntTriple> gt;
    for (const auto& row : read_jsonl(args.ground_truth)) {
        detail::require_field(row, "video_id");
        gt[row.at("video_id").get<std::string>()] = int_triple_from_json(row);
    }

    std::vector<Judgment> rows;
    for (const auto& row : read_jsonl(args.judgments))
        rows.push_back(judgment_from_json(row));

    std::vector<std::string> missing;
    std::vector<json> out_rows;
    std::map<std::string, std::vector<std::size_t>> groups;
    std::vector<std::string> group_order;
    for (const auto& j : rows) {
        auto git = gt.find(j.video_id);
        if (git == gt.end()) {
            missing.push_back(j.video_id);
            continue;
        }
        RewardBreakdown rb;
        if (j.scores) {
            rb = total_reward(*j.scores, git->second, j.raw_text, cfg.lambda);
        } else {
            rb.r_fmt = format_reward(j.raw_text);
            rb.lambda = cfg.lambda;
            rb.total = cfg.lambda * rb.r_fmt;
        }
        json out_row = to_json(j);
        out_row["r_acc"] = rb.r_acc;
        out_row["r_fmt"] = rb.r_fmt;
        out_row["lambda"] = rb.lambda;
        out_row["total"] = rb.total;
        if (j.extra.contains("rollout_id")) {
            std::string gid = j.extra.at("rollout_id").get<std::string>();
            auto [it, fresh] = groups.try_emplace(gid);
            if (fresh) group_order.push_back(gid);
            it->second.push_back(out_rows.size());
        }
        out_rows.push_back(std::move(out_row));
    }
    if (!missing.empty())
        throw std::runtime_error("judgments without ground truth: " +
                                 detail::join_ids(missing));

    for (const auto& gid : group_order) {
        const auto& members = groups.at(gid);
        if (static_cast<int>(members.size()) != args.group_size)
            log << "reward: group '" << gid << "' has " << members.size()
                << " rollouts, expected " << args.group_size << "\n";
        if (members.size() < 2) continue;  // advantages undefined
        std::vector<double> totals;
        for (std::size_t idx : members)
            totals.push_back(out_rows[idx].at("total").get<double>());
        std::vector<double> adv = group_advantages(totals);
        for (std::size_t k = 0; k < members.size(); ++k)
            out_rows[members[k]]["advantage"] = adv[k];
    }

    AtomicWriter out(args.out);
    for (const auto& row : out_rows) out.write_line(row);
    out.commit();
    log << "reward: " << out_rows.size() << " rows, " << group_order.size()
        << " rollout groups\n";
    return 0;
}

// ---------------------------------------------------------------------------
// bon

struct BonArgs {
    std::string candidates;  // judgments with prompt_id fields
    std::string external;    // per-video metric values, CSV or JSONL
    std::string out;
};

namespace detail {

inline std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

}  // namespace detail

// Reads a per-video metric table: JSONL rows with video_id plus numeric
// fields, or a CSV with a video_id column.
inline ExternalScores load_external_scores(const std::string& path) {
    ExternalScores out;
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        std::istringstream in(read_file(path));
        std::string line;
        if (!std::getline(in, line))
            throw std::runtime_error("empty external score table: " + path);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto header = detail::parse_csv_line(line);
        std::size_t vid_col = header.size();
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == "video_id") vid_col = c;
        if (vid_col == header.size())
            throw std::runtime_error("external CSV lacks a video_id column");
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto cells = detail::parse_csv_line(line);
            if (cells.size() != header.size())
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": wrong column count");
            auto& row = out[cells[vid_col]];
            for (std::size_t c = 0; c < cells.size(); ++c)
                if (c != vid_col) row[header[c]] = std::stod(cells[c]);
        }
        return out;
    }
    for (const auto& row : read_jsonl(path)) {
        detail::require_field(row, "video_id");
        auto& dest = out[row.at("video_id").get<std::string>()];
        for (auto it = row.begin(); it != row.end(); ++it)
            if (it.value().is_number()) dest[it.key()] = it.value().get<double>();
    }
    return out;
}

inline int cmd_bon(const BonArgs& args, const RunConfig& cfg, std::ostream& log) {
    std::vector<Judgment> rows;
    for (const auto& row : read_jsonl(args.candidates))
        rows.push_back(judgment_from_json(row));
    auto sets = build_candidate_sets(rows);
    ExternalScores external = load_external_scores(args.external);

    BonReport report = bon_report(sets, external, {}, cfg.seed);
    report.score_mode = "soft_when_available";

    Provenance prov = make_provenance(cfg.snapshot(), {args.candidates, args.external});
    write_file_atomic(args.out, render_report(bon_table(report), prov, cfg.format,
                                              to_json(report)));
    log << "bon: " << report.n_sets << " candidate sets, " << report.metrics.size()
        << " metrics\n";
    return 0;
}

// ---------------------------------------------------------------------------
// iaa

struct IaaArgs {
    std::string annotations;
    std::string out;
    AlphaLevel level = AlphaLevel::Interval;
};

inline int cmd_iaa(const IaaArgs& args, const RunConfig& cfg, std::ostream& log) {
    std::map<std::string, std::vector<AnnotationRecord>> by_video;
    std::vector<std::string> video_order;
    for (const auto& row : read_jsonl(args.annotations)) {
        AnnotationRecord rec = annotation_from_json(row);
        auto [it, fresh] = by_video.try_emplace(rec.video_id);
        if (fresh) video_order.push_back(rec.video_id);
        it->second.push_back(std::move(rec));
    }

    std::size_t excluded = 0;
    std::array<std::vector<std::vector<int>>, 3> rows_per_dim;
    for (const auto& vid : video_order) {
        const auto& recs = by_video.at(vid);
        if (recs.size() < 2) {
            ++excluded;
            continue;
        }
        for (std::size_t d = 0; d < 3; ++d) {
            std::vector<int> values;
            for (const auto& rec : recs) values.push_back(rec.scores.at(kDimensions[d]));
            rows_per_dim[d].push_back(std::move(values));
        }
    }
    if (excluded > 0)
        log << "iaa: excluded " << excluded << " single-annotator items\n";
    if (rows_per_dim[0].empty())
        throw std::runtime_error("iaa: no items with at least two annotators");

    std::array<AgreementReport, 3> per_dim;
    for (std::size_t d = 0; d < 3; ++d)
        per_dim[d] = agreement_report(rows_per_dim[d], args.level);

    json cfg_snapshot = cfg.snapshot();
    cfg_snapshot["alpha_level"] =
        args.level == AlphaLevel::Interval ? "interval" : "ordinal";
    Provenance prov = make_provenance(cfg_snapshot, {args.annotations});
    write_file_atomic(args.out, render_report(agreement_table(per_dim), prov,
                                              cfg.format, agreement_json(per_dim)));
    log << "iaa: " << rows_per_dim[0].size() << " items\n";
    return 0;
}

// ---------------------------------------------------------------------------
// sample-models

struct SampleModelsArgs {
    std::string roster;   // JSON: tier name -> list of model ids
    std::string prompts;  // JSONL rows with prompt_id
    std::string out;
};

inline std::map<Tier, std::vector<std::string>> load_roster(const std::string& path) {
    json j = json::parse(read_file(path));
    std::map<Tier, std::vector<std::string>> roster;
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto tier = tier_from_string(it.key());
        if (!tier) throw std::runtime_error("roster: unknown tier: " + it.key());
        roster[*tier] = it.value().get<std::vector<std::string>>();
    }
    return roster;
}

inline int cmd_sample_models(const SampleModelsArgs& args, const RunConfig& cfg,
                             std::ostream& log) {
    auto roster = load_roster(args.roster);
    AtomicWriter out(args.out);
    std::size_t n = 0;
    for (const auto& row : read_jsonl(args.prompts)) {
        detail::require_field(row, "prompt_id");
        std::string pid = row.at("prompt_id").get<std::string>();
        auto models = sample_models_for_prompt(roster, derive_seed(cfg.seed, pid));
        out.write_line({{"prompt_id", pid}, {"models", models}});
        ++n;
    }
    out.commit();
    log << "sample-models: " << n << " prompts\n";
    return 0;
}

// ---------------------------------------------------------------------------
// reconcile

struct ReconcileArgs {
    std::string entries;  // rows with video_id, human{...}, model{...}
    std::string out;
};

// File-mode reconciliation applies one round of the rules per row; rows
// needing a rescore are flagged for the judge-backed loop rather than
// resolved here.
inline int cmd_reconcile(const ReconcileArgs& args, const RunConfig&,
                         std::ostream& log) {
    AtomicWriter out(args.out);
    std::size_t n = 0, rescore = 0;
    for (const auto& row : read_jsonl(args.entries)) {
        detail::require_field(row, "video_id");
        detail::require_field(row, "human");
        detail::require_field(row, "model");
        IntTriple human = int_triple_from_json(row.at("human"));
        IntTriple model = int_triple_from_json(row.at("model"));
        ReconcileOutcome outcome = reconcile_scores(human, model);
        json out_row = row;
        out_row["status"] = reconcile_status_name(outcome.status);
        if (outcome.final_scores) out_row["final"] = to_json(*outcome.final_scores);
        out.write_line(out_row);
        ++n;
        if (outcome.status == ReconcileStatus::RescoreNeeded) ++rescore;
    }
    out.commit();
    log << "reconcile: " << n << " entries, " << rescore << " flagged for rescoring\n";
    return 0;
}

}  // namespace vs2
