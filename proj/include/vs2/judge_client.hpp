#pragma once

// HTTP client for the judge-model endpoint: chat-completion requests carrying
// the query template plus sampled frames, retry with exponential backoff,
// token-distribution harvesting from returned logprobs, and a bounded-
// concurrency batch runner with idempotent resume support.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include <vs2/core.hpp>
#include <vs2/scoring.hpp>

namespace vs2 {

// ---------------------------------------------------------------------------
// Configuration

struct EndpointConfig {
    std::string base_url;            // flag or VS2_BASE_URL
    std::string api_key;             // VS2_API_KEY
    std::string model_name = "judge";
    double temperature = 0.7;
    int max_concurrent = 4;
    int retry_limit = 3;             // total attempts per request
    bool request_logprobs = true;
    int top_logprobs = 5;
    double backoff_base_ms = 250.0;  // doubles per retry
    double timeout_s = 60.0;
};

inline void validate(const EndpointConfig& cfg) {
    if (cfg.base_url.empty())
        throw std::invalid_argument("endpoint config: base_url is empty");
    if (!(cfg.temperature >= 0.0))
        throw std::invalid_argument("endpoint config: temperature must be >= 0");
    if (cfg.max_concurrent < 1)
        throw std::invalid_argument("endpoint config: max_concurrent must be >= 1");
    if (cfg.retry_limit < 1)
        throw std::invalid_argument("endpoint config: retry_limit must be >= 1");
}

// Fills base_url/api_key from VS2_BASE_URL/VS2_API_KEY when unset.
inline void apply_endpoint_env(EndpointConfig& cfg) {
    if (cfg.base_url.empty())
        if (const char* v = std::getenv("VS2_BASE_URL")) cfg.base_url = v;
    if (cfg.api_key.empty())
        if (const char* v = std::getenv("VS2_API_KEY")) cfg.api_key = v;
}

struct EndpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Frame references

// Maps sampled timestamps to image references the endpoint can fetch.  The
// reference implementation points into the video via media-fragment URIs;
// callers with pre-extracted frame files supply their own extractor.
using FrameExtractor =
    std::function<std::vector<std::string>(const VideoEntry&, const std::vector<double>&)>;

inline std::vector<std::string> default_frame_refs(const VideoEntry& entry,
                                                   const std::vector<double>& ts) {
    std::vector<std::string> refs;
    refs.reserve(ts.size());
    for (double t : ts) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "#t=%.3f", t);
        refs.push_back(entry.media_uri + buf);
    }
    return refs;
}

// ---------------------------------------------------------------------------
// Wire format

inline json build_chat_request(const EndpointConfig& cfg, const std::string& query,
                               const std::vector<std::string>& frame_refs) {
    json content = json::array();
    content.push_back({{"type", "text"}, {"text", query}});
    for (const auto& ref : frame_refs)
        content.push_back({{"type", "image_url"}, {"image_url", {{"url", ref}}}});
    json req = {{"model", cfg.model_name},
                {"temperature", cfg.temperature},
                {"messages", json::array({json{{"role", "user"}, {"content", content}}})}};
    if (cfg.request_logprobs) {
        req["logprobs"] = true;
        req["top_logprobs"] = cfg.top_logprobs;
    }
    return req;
}

namespace detail {

inline std::optional<int> digit_token_value(const std::string& token) {
    std::size_t b = 0, e = token.size();
    while (b < e && std::isspace(static_cast<unsigned char>(token[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(token[e - 1]))) --e;
    if (e - b != 1) return std::nullopt;
    char c = token[b];
    if (c < '1' || c > '5') return std::nullopt;
    return c - '0';
}

}  // namespace detail

// Recovers per-dimension score distributions from the response's per-token
// alternatives.  Tokens are aligned against the generated text by cumulative
// byte offset; the token covering each score digit contributes exp(logprob)
// weight for every alternative that is itself a score digit.  Returns absent
// when alignment fails or any dimension ends up with no mass.
inline std::optional<std::array<TokenScoreDistribution, 3>> harvest_token_dists(
    const json& logprob_tokens, const std::string& text,
    const std::array<ScoreSpan, 3>& spans) {
    std::array<TokenScoreDistribution, 3> out;
    std::size_t offset = 0;
    for (const auto& tok : logprob_tokens) {
        std::string piece = tok.at("token").get<std::string>();
        if (text.compare(offset, piece.size(), piece) != 0) return std::nullopt;
        std::size_t begin = offset, end = offset + piece.size();
        for (std::size_t d = 0; d < 3; ++d) {
            if (spans[d].begin < begin || spans[d].begin >= end) continue;
            bool chosen_listed = false;
            if (tok.contains("top_logprobs")) {
                for (const auto& alt : tok.at("top_logprobs")) {
                    std::string alt_tok = alt.at("token").get<std::string>();
                    if (alt_tok == piece) chosen_listed = true;
                    if (auto v = detail::digit_token_value(alt_tok))
                        out[d].set(*v, out[d].weight(*v) +
                                           std::exp(alt.at("logprob").get<double>()));
                }
            }
            if (!chosen_listed && tok.contains("logprob"))
                if (auto v = detail::digit_token_value(piece))
                    out[d].set(*v, out[d].weight(*v) +
                                       std::exp(tok.at("logprob").get<double>()));
        }
        offset = end;
    }
    for (const auto& d : out)
        if (!(d.total() > 0.0)) return std::nullopt;
    return out;
}

// Builds the judgment row for one video from a chat-completion response.
// Parse failures are recorded on the row, never thrown.
inline Judgment judgment_from_response(const json& response, const VideoEntry& entry) {
    Judgment out;
    out.video_id = entry.video_id;
    const json& choice = response.at("choices").at(0);
    out.raw_text = choice.at("message").at("content").get<std::string>();
    ParsedJudgment parsed = parse_judgment(out.raw_text);
    out.rationale = parsed.rationale;
    if (parsed.status != ParseStatus::Ok) {
        out.parse_failed = true;
        out.extra["parse_status"] = parse_status_name(parsed.status);
        return out;
    }
    out.scores = parsed.scores;
    if (choice.contains("logprobs") && !choice.at("logprobs").is_null() &&
        choice.at("logprobs").contains("content")) {
        if (auto dists = harvest_token_dists(choice.at("logprobs").at("content"),
                                             out.raw_text, parsed.spans))
            out.token_dists = *dists;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Client

// One batch's outcome: completed rows in input order, plus the first
// endpoint failure if the batch had to abort early.
struct BatchResult {
    std::vector<Judgment> rows;
    std::optional<std::string> error;
};

class JudgeClient {
  public:
    explicit JudgeClient(EndpointConfig cfg) : cfg_(std::move(cfg)) {
        validate(cfg_);
    }

    const EndpointConfig& config() const { return cfg_; }

    // Single request with retry: transient failures (connect errors, 408,
    // 429, 5xx) back off exponentially until retry_limit total attempts;
    // other HTTP errors fail immediately.
    json post_chat(const json& request) const {
        httplib::Client http(cfg_.base_url);
        http.set_connection_timeout(std::chrono::milliseconds(
            static_cast<long long>(cfg_.timeout_s * 1000)));
        http.set_read_timeout(
            std::chrono::milliseconds(static_cast<long long>(cfg_.timeout_s * 1000)));
        httplib::Headers headers;
        if (!cfg_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + cfg_.api_key);

        std::string last_error;
        for (int attempt = 1; attempt <= cfg_.retry_limit; ++attempt) {
            if (attempt > 1) {
                double ms = cfg_.backoff_base_ms *
                            std::pow(2.0, static_cast<double>(attempt - 2));
                std::this_thread::sleep_for(
                    std::chrono::microseconds(static_cast<long long>(ms * 1000)));
            }
            auto res = http.Post("/v1/chat/completions", headers, request.dump(),
                                 "application/json");
            if (!res) {
                last_error = "connection error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 200) {
                try {
                    return json::parse(res->body);
                } catch (const json::exception& e) {
                    throw EndpointError(std::string("malformed endpoint response: ") +
                                        e.what());
                }
            }
            bool transient =
                res->status == 408 || res->status == 429 || res->status >= 500;
            last_error = "HTTP " + std::to_string(res->status);
            if (!transient)
                throw EndpointError("endpoint rejected request: " + last_error);
        }
        throw EndpointError("endpoint failed after " +
                            std::to_string(cfg_.retry_limit) +
                            " attempts: " + last_error);
    }

    // Judges one video.  Endpoint exhaustion throws EndpointError; a
    // response that fails to parse is returned as a flagged row.
    Judgment judge_video(const VideoEntry& entry, const FrameSamplingPlan& plan,
                         const FrameExtractor& frames = default_frame_refs) const {
        auto ts = plan.timestamps(entry.duration_s);
        json request =
            build_chat_request(cfg_, build_query(entry.prompt_text), frames(entry, ts));
        json response = post_chat(request);
        Judgment row = judgment_from_response(response, entry);
        row.extra["prompt_id"] = entry.prompt_id;
        return row;
    }

    // Judges entries concurrently with at most max_concurrent requests in
    // flight.  skip_ids supports idempotent resume.  On an endpoint error
    // the batch stops scheduling new work and returns the completed rows
    // with the error recorded.
    BatchResult judge_batch(const std::vector<VideoEntry>& entries,
                            const FrameSamplingPlan& plan,
                            const std::set<std::string>& skip_ids = {},
                            const FrameExtractor& frames = default_frame_refs) const {
        std::vector<std::size_t> todo;
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (!skip_ids.count(entries[i].video_id)) todo.push_back(i);

        std::vector<std::optional<Judgment>> slots(entries.size());
        std::atomic<std::size_t> next{0};
        std::atomic<bool> abort{false};
        std::mutex error_mutex;
        std::string first_error;

        auto worker = [&] {
            for (;;) {
                if (abort.load()) return;
                std::size_t k = next.fetch_add(1);
                if (k >= todo.size()) return;
                std::size_t i = todo[k];
                try {
                    slots[i] = judge_video(entries[i], plan, frames);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (first_error.empty()) first_error = e.what();
                    abort.store(true);
                    return;
                }
            }
        };

        std::size_t n_workers =
            std::min(static_cast<std::size_t>(cfg_.max_concurrent), todo.size());
        std::vector<std::thread> threads;
        threads.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(worker);
        for (auto& t : threads) t.join();

        BatchResult result;
        for (auto& slot : slots)
            if (slot) result.rows.push_back(std::move(*slot));
        if (!first_error.empty()) result.error = first_error;
        return result;
    }

  private:
    EndpointConfig cfg_;
};

}  // namespace vs2
