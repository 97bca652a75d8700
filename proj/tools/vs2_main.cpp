// Command-line front end.  Flag parsing only; all behavior lives in the
// library so tests can drive the same code paths without a subprocess.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <vs2/cli.hpp>

namespace {

// Flags override config-file values only when actually passed.
struct CommonFlags {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<double> fps;
    std::optional<int> max_frames;
    std::optional<std::string> score_mode;
    std::optional<double> lambda;
    std::optional<int> jobs;
    std::optional<std::string> format;
    std::optional<std::string> base_url;
    std::optional<std::string> model_name;

    void attach(CLI::App& cmd) {
        cmd.add_option("--config", config, "JSON config file");
        cmd.add_option("--seed", seed, "base RNG seed");
        cmd.add_option("--fps", fps, "frame sampling rate");
        cmd.add_option("--max-frames", max_frames, "frame cap per video");
        cmd.add_option("--score-mode", score_mode,
                       "soft score mode: as_written or expectation");
        cmd.add_option("--lambda", lambda, "format reward weight");
        cmd.add_option("--jobs", jobs, "worker threads");
        cmd.add_option("--format", format, "report format: table, csv, or json");
        cmd.add_option("--base-url", base_url, "judge endpoint base URL");
        cmd.add_option("--model", model_name, "judge model name");
    }

    vs2::RunConfig resolve() const {
        vs2::RunConfig cfg = vs2::make_run_config(config);
        if (seed) cfg.seed = *seed;
        if (fps) cfg.fps = *fps;
        if (max_frames) cfg.max_frames = *max_frames;
        if (score_mode) {
            auto m = vs2::soft_score_mode_from_string(*score_mode);
            if (!m) throw CLI::ValidationError("--score-mode", "unknown: " + *score_mode);
            cfg.score_mode = *m;
        }
        if (lambda) cfg.lambda = *lambda;
        if (jobs) cfg.jobs = *jobs;
        if (format) {
            auto f = vs2::report_format_from_string(*format);
            if (!f) throw CLI::ValidationError("--format", "unknown: " + *format);
            cfg.format = *f;
        }
        if (base_url) cfg.endpoint.base_url = *base_url;
        if (model_name) cfg.endpoint.model_name = *model_name;
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"video evaluation harness"};
    app.require_subcommand(1);

    int rc = 0;
    auto run = [&rc](auto fn) { rc = fn(); };

    // filter-prompts
    auto* filter_cmd = app.add_subcommand("filter-prompts", "apply curation rules");
    static CommonFlags filter_flags;
    static vs2::FilterPromptsArgs filter_args;
    filter_flags.attach(*filter_cmd);
    filter_cmd->add_option("--in", filter_args.in, "candidate prompts JSONL")->required();
    filter_cmd->add_option("--out", filter_args.out, "kept prompts JSONL")->required();
    filter_cmd->add_option("--audit", filter_args.audit, "per-candidate audit JSONL")
        ->required();
    filter_cmd->callback([&] {
        run([&] {
            return vs2::cmd_filter_prompts(filter_args, filter_flags.resolve(),
                                           std::cerr);
        });
    });

    // judge
    auto* judge_cmd = app.add_subcommand("judge", "score videos via the endpoint");
    static CommonFlags judge_flags;
    static vs2::JudgeArgs judge_args;
    judge_flags.attach(*judge_cmd);
    judge_cmd->add_option("--videos", judge_args.videos, "video entries JSONL")
        ->required();
    judge_cmd->add_option("--out", judge_args.out, "judgments JSONL (resumable)")
        ->required();
    judge_cmd->callback([&] {
        run([&] { return vs2::cmd_judge(judge_args, judge_flags.resolve(), std::cerr); });
    });

    // eval-pointscore
    auto* ps_cmd = app.add_subcommand("eval-pointscore", "accuracy and correlation");
    static CommonFlags ps_flags;
    static vs2::EvalPointscoreArgs ps_args;
    ps_flags.attach(*ps_cmd);
    ps_cmd->add_option("--judgments", ps_args.judgments, "judgments JSONL")->required();
    ps_cmd->add_option("--ground-truth", ps_args.ground_truth, "reference scores JSONL")
        ->required();
    ps_cmd->add_option("--out", ps_args.out, "report path")->required();
    ps_cmd->add_flag("--allow-partial", ps_args.allow_partial,
                     "tolerate missing judgments");
    ps_cmd->add_option("--min-coverage", ps_args.min_coverage,
                       "required join coverage percent");
    ps_cmd->add_flag("--int-scores", ps_args.use_int_scores,
                     "ignore soft scores; use written integers");
    ps_cmd->callback([&] {
        run([&] {
            return vs2::cmd_eval_pointscore(ps_args, ps_flags.resolve(), std::cerr);
        });
    });

    // eval-preference
    auto* pref_cmd = app.add_subcommand("eval-preference", "pairwise preference accuracy");
    static CommonFlags pref_flags;
    static vs2::EvalPreferenceArgs pref_args;
    pref_flags.attach(*pref_cmd);
    pref_cmd->add_option("--pairs", pref_args.pairs, "preference pairs JSONL")
        ->required();
    pref_cmd->add_option("--judgments", pref_args.judgments, "judgments JSONL")
        ->required();
    pref_cmd->add_option("--out", pref_args.out, "report path")->required();
    pref_cmd->add_option("--margin-frac", pref_args.margin_frac,
                         "tie margin as a fraction of the scale");
    pref_cmd->add_option("--scale-min", pref_args.scale_min, "score scale minimum");
    pref_cmd->add_option("--scale-max", pref_args.scale_max, "score scale maximum");
    pref_cmd->add_flag("--int-scores", pref_args.use_int_scores,
                       "ignore soft scores; use written integers");
    pref_cmd->callback([&] {
        run([&] {
            return vs2::cmd_eval_preference(pref_args, pref_flags.resolve(), std::cerr);
        });
    });

    // rescale
    auto* rescale_cmd = app.add_subcommand("rescale", "map native baseline scores to 1-5");
    static CommonFlags rescale_flags;
    static vs2::RescaleArgs rescale_args;
    rescale_flags.attach(*rescale_cmd);
    rescale_cmd->add_option("--native", rescale_args.native, "native scores JSONL")
        ->required();
    rescale_cmd->add_option("--out", rescale_args.out, "rescaled JSONL")->required();
    rescale_cmd->add_option("--spec", rescale_args.spec_name, "rescale spec name")
        ->required();
    rescale_cmd->add_option("--specs-file", rescale_args.specs_path,
                            "spec registry JSON (default: builtin)");
    rescale_cmd->callback([&] {
        run([&] {
            return vs2::cmd_rescale(rescale_args, rescale_flags.resolve(), std::cerr);
        });
    });

    // reward
    auto* reward_cmd = app.add_subcommand("reward", "training rewards and advantages");
    static CommonFlags reward_flags;
    static vs2::RewardArgs reward_args;
    reward_flags.attach(*reward_cmd);
    reward_cmd->add_option("--judgments", reward_args.judgments, "rollout judgments JSONL")
        ->required();
    reward_cmd->add_option("--ground-truth", reward_args.ground_truth,
                           "reference scores JSONL")
        ->required();
    reward_cmd->add_option("--out", reward_args.out, "annotated JSONL")->required();
    reward_cmd->add_option("--group-size", reward_args.group_size,
                           "expected rollouts per group");
    reward_cmd->callback([&] {
        run([&] {
            return vs2::cmd_reward(reward_args, reward_flags.resolve(), std::cerr);
        });
    });

    // bon
    auto* bon_cmd = app.add_subcommand("bon", "best-of-N selection report");
    static CommonFlags bon_flags;
    static vs2::BonArgs bon_args;
    bon_flags.attach(*bon_cmd);
    bon_cmd->add_option("--candidates", bon_args.candidates,
                        "judgments JSONL with prompt_id")
        ->required();
    bon_cmd->add_option("--external", bon_args.external,
                        "per-video metric table (CSV or JSONL)")
        ->required();
    bon_cmd->add_option("--out", bon_args.out, "report path")->required();
    bon_cmd->callback([&] {
        run([&] { return vs2::cmd_bon(bon_args, bon_flags.resolve(), std::cerr); });
    });

    // iaa
    auto* iaa_cmd = app.add_subcommand("iaa", "inter-annotator agreement");
    static CommonFlags iaa_flags;
    static vs2::IaaArgs iaa_args;
    static std::string iaa_level = "interval";
    iaa_flags.attach(*iaa_cmd);
    iaa_cmd->add_option("--annotations", iaa_args.annotations, "annotation JSONL")
        ->required();
    iaa_cmd->add_option("--out", iaa_args.out, "report path")->required();
    iaa_cmd->add_option("--level", iaa_level, "alpha level: interval or ordinal");
    iaa_cmd->callback([&] {
        run([&] {
            if (iaa_level == "interval")
                iaa_args.level = vs2::AlphaLevel::Interval;
            else if (iaa_level == "ordinal")
                iaa_args.level = vs2::AlphaLevel::Ordinal;
            else
                throw std::runtime_error("unknown alpha level: " + iaa_level);
            return vs2::cmd_iaa(iaa_args, iaa_flags.resolve(), std::cerr);
        });
    });

    // sample-models
    auto* sm_cmd = app.add_subcommand("sample-models", "assign generators per prompt");
    static CommonFlags sm_flags;
    static vs2::SampleModelsArgs sm_args;
    sm_flags.attach(*sm_cmd);
    sm_cmd->add_option("--roster", sm_args.roster, "tier roster JSON")->required();
    sm_cmd->add_option("--prompts", sm_args.prompts, "prompts JSONL")->required();
    sm_cmd->add_option("--out", sm_args.out, "assignments JSONL")->required();
    sm_cmd->callback([&] {
        run([&] {
            return vs2::cmd_sample_models(sm_args, sm_flags.resolve(), std::cerr);
        });
    });

    // reconcile
    auto* rec_cmd = app.add_subcommand("reconcile", "merge human and model scores");
    static CommonFlags rec_flags;
    static vs2::ReconcileArgs rec_args;
    rec_flags.attach(*rec_cmd);
    rec_cmd->add_option("--entries", rec_args.entries, "score pairs JSONL")->required();
    rec_cmd->add_option("--out", rec_args.out, "outcomes JSONL")->required();
    rec_cmd->callback([&] {
        run([&] {
            return vs2::cmd_reconcile(rec_args, rec_flags.resolve(), std::cerr);
        });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
