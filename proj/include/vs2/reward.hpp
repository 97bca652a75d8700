#pragma once

// Training reward signal: accuracy reward over score triples, binary format
// reward over raw judge output, their weighted combination, and group-relative
// advantage normalization.

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include <vs2/core.hpp>
#include <vs2/scoring.hpp>

namespace vs2 {

// Tiered accuracy reward.  With e = #dimensions matching exactly and
// o = #dimensions off by one: e=3 -> 1.0, (e=2,o=1) -> 0.7, (e=1,o=2) -> 0.4,
// (e=0,o=3) -> 0.1; any dimension deviating by 2 or more forces 0.
inline double accuracy_reward(const IntTriple& pred, const IntTriple& gt) {
    int exact = 0, off_by_one = 0;
    for (Dimension d : kDimensions) {
        int diff = std::abs(pred.at(d) - gt.at(d));
        if (diff == 0)
            ++exact;
        else if (diff == 1)
            ++off_by_one;
        else
            return 0.0;
    }
    switch (exact) {
        case 3: return 1.0;
        case 2: return 0.7;
        case 1: return 0.4;
        default: return off_by_one == 3 ? 0.1 : 0.0;
    }
}

// 1.0 iff the output carries a think-tag pair in order with a non-empty
// rationale (after trimming) and three parseable dimension scores after the
// closing tag; 0.0 otherwise.
inline double format_reward(const std::string& raw_text) {
    std::size_t open = raw_text.find("<think>");
    if (open == std::string::npos) return 0.0;
    std::size_t close = raw_text.find("</think>", open + 7);
    if (close == std::string::npos) return 0.0;
    std::string rationale = raw_text.substr(open + 7, close - (open + 7));
    std::size_t b = rationale.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return 0.0;  // rationale is all whitespace
    ParsedJudgment parsed = parse_judgment(raw_text);
    return parsed.status == ParseStatus::Ok ? 1.0 : 0.0;
}

struct RewardBreakdown {
    double r_acc = 0.0;
    double r_fmt = 0.0;
    double lambda = 0.0;
    double total = 0.0;
};

// Where training starts from decides the format-reward weight: a base model
// needs the format incentive (lambda 0.3), an SFT model already formats
// correctly (lambda 0).
enum class StartPoint { Base, Sft };

inline double default_lambda(StartPoint sp) {
    return sp == StartPoint::Base ? 0.3 : 0.0;
}

inline RewardBreakdown total_reward(const IntTriple& pred, const IntTriple& gt,
                                    const std::string& raw_text, double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("total_reward: lambda must be >= 0");
    RewardBreakdown rb;
    rb.r_acc = accuracy_reward(pred, gt);
    rb.r_fmt = format_reward(raw_text);
    rb.lambda = lambda;
    rb.total = rb.r_acc + lambda * rb.r_fmt;
    return rb;
}

// Group-relative advantages: a_i = (r_i - mean) / (std + eps) with population
// std and eps = 1e-6.  All-equal groups get exactly zero advantages.
inline std::vector<double> group_advantages(const std::vector<double>& rewards) {
    if (rewards.size() < 2) throw std::invalid_argument("group too small");
    const double n = static_cast<double>(rewards.size());
    double mean = 0.0;
    for (double r : rewards) mean += r;
    mean /= n;
    bool all_equal = true;
    double var = 0.0;
    for (double r : rewards) {
        if (r != rewards.front()) all_equal = false;
        var += (r - mean) * (r - mean);
    }
    if (all_equal) return std::vector<double>(rewards.size(), 0.0);
    double std_dev = std::sqrt(var / n);
    std::vector<double> adv;
    adv.reserve(rewards.size());
    for (double r : rewards) adv.push_back((r - mean) / (std_dev + 1e-6));
    return adv;
}

}  // namespace vs2
