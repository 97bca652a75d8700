#pragma once

// Prompt templates used on the wire and in the curation pipeline, embedded as
// constants so the library stays hermetic.  The same bytes ship as text assets
// under assets/templates/ (a test asserts they stay in sync).  Variable syntax
// is $name; substitution is single-pass and literal, so "$" characters inside
// substituted values are never re-expanded.

#include <cctype>
#include <map>
#include <string>
#include <string_view>

namespace vs2 {

// Query template: the prompt sent to the judge for every scored video.
// Transcribed verbatim, including its idiosyncratic phrasing.
inline constexpr std::string_view kQueryTemplate =
    R"TPL(We would like to evaluate its quality from three dimensions: 'visual quality', 'text-to-video alignment' and 'physical/common-sense consistency'.

Below is the definition of each dimension:

(1) visual quality:

The dimension 'visual quality' cares about the video's visual and optical properties, including 'resolution, overall clarity, local blurriness, smoothness, stability of brightness/contrast, distortion/misalignment, abrupt changes, and any other factors the affect the watching experience'. The keywords written by the annotators are also mostly derived from the above factors.

(2) text alignment:

The dimension 'text-to-video alignment' mainly assesses whether the generated video fully and accurately depicts the elements mentioned in the text prompt, such as characters, actions, animals, etc., as well as background, quantity, color, weather, and so on. So the keywords written by annotators sometimes only indicate the elements that are missing from the video.

(3) physical/common-sense consistency:

The dimension 'physical/common-sense consistency' mainly examines whether there are any violations of common sense, physical laws, or any other aspects in the video that appear strange or unnatural. Most of the keywords provided by annotators point out the specific abnormalities or inconsistencies they observed in the video.

Here we provide an AI video generated by text-to-video models and its text prompt:

$t2v_prompt.

Based on the video content and the dimension definitions, please evaluate the video quality and give the quality score. The score must be in the range of 1 - 5.)TPL";

// Rationale-elicitation template: turns terse per-dimension annotator
// comments into a detailed analysis, scored 1-5 per dimension.
inline constexpr std::string_view kRationaleElicitationTemplate =
    R"TPL(We are collecting and processing human annotations for the quality evaluation of AI-generated videos.

Dimension definitions:

(1) Visual Quality:

Mainly evaluates the video's visual and optical properties, including 'resolution, overall clarity, local blurriness, smoothness, stability of brightness/contrast, distortion/misalignment, abrupt changes, and any other factors the affect the watching experience'. The keywords written by the annotators are also mostly derived from the above factors.

(2) Text Alignment:

Mainly assesses whether the generated video fully and accurately depicts the elements mentioned in the text prompt, such as characters, actions, animals, etc., as well as background, quantity, color, weather, and so on. So the keywords written by annotators sometimes only indicate the elements that are missing from the video.

(3) Physical/Common-sense Consistency:

Mainly examines whether there are any violations of common sense, physical laws, or any other aspects in the video that appear strange or unnatural. Most of the keywords provided by annotators point out the specific abnormalities or inconsistencies they observed in the video.

With the reference of some frames of the video, and the comments of 3 dimensions from a human annotator may also be provided, please do your best to analyze and give a INTEGAR score between 1 and 5 for these dimensions, where 1 means very bad, 3 means medium, and 5 means very good.

Sometimes human comments may be brief or lacking details, or the human comments may be null, — please check the aspects in dimension definitions and make sure to thoroughly perceive and analyze the video on your own.
Your reasoning should be detailed, professional, and comprehensive. **DO NOT mention any human comment in your thinking**; you should pretend not to know these comments (if they are provided), they are provided solely to inform and enhance your understanding for better evaluation.

Output format:

Your response must follow the format below strictly:

{

"score_visual": "quality score" (this field is only allowed to be a number between 1 and 5, inclusive, ),

"score_t2v": "quality score" (this field is only allowed to be a number between 1 and 5, inclusive),

"score_phy": "quality score" (this field is only allowed to be a number between 1 and 5, inclusive),

}

DO NOT include any text before or after the json block.

Here is the Input:
Text prompt used to generate the video: $prompt

Comment for "visual quality": $comment_visual

Comment for "text-to-video alignment" (the elements or events not expressed or not aligned in the video): $comment_t2v

Comment for "physical/common-sense consistency" (the elements or events that look weird, abnormal or unnatural): $comment_phy)TPL";

// Rationale-alignment template: revises an analysis so its severity wording
// matches the final reconciled scores without changing its structure.
inline constexpr std::string_view kRationaleAlignmentTemplate =
    R"TPL(I'm conducting a multi-dimensional quality assessment of AI-generated videos, focusing on the dimensions of (1) Visual Quality, (2) Text Alignment, and (3) Physical/Common-sense Consistency.

I will provide a multi-dimensional quality analysis for a video. However, the scores assigned in the analysis may not be entirely accurate. And the ground truth scores for each dimension will also be provided. Your task is to adjust the analysis text accordingly to ensure it aligns with the actual scores. In many cases, this means revising the severity of issues for certain dimension based on the ground truth scores. The scale of score is [1, 2, 3, 4, 5].

**Important Notes:**

(1) **Any human comment should NOT be mentioned in the output analysis**. If the input analysis quote or mention human comments, you should pretend not to know them in your output, they are provided solely to inform and enhance your understanding for better evaluation.

(2) **DO NOT** alter the overall structure or core meaning of the analysis. Only revise specific expressions or phrases as needed so that the content reasonably reflects the provided scores.

(3) The input original analysis is constructed from the sampled frames of the video, if the input analysis includes evaluations of individual frames or frame-by-frame assessments, you should appropriately transform them into an overall evaluation of the entire video, since the final output is expected to be based on the video as a whole.

(4) Your output analysis should be approximately the same length as the input analysis. If the input analysis is not very detailed and specific, you may extend your output accordingly.

Output format:

Your response must follow the format below strictly:
{
    "new_thinking": "modified analysis" (this field is only allowed to be string),
}
DO NOT include any text before or after the dictionary block.

Here is the input:
multi-dimensional analysis: $thinking

ground truth score of Dim-1 "Visual Quality":$v_score

ground-truth scoreof Dim-2 "Text-to-Video Alignment":$t_score

ground-truth of Dim-3 "Physical Consistency' (also referred to as Common-sense Consistency): $p_score)TPL";

// Single-pass substitution of $name variables.  Unknown names are left in
// place; values are inserted verbatim and never re-scanned.
inline std::string render_template(std::string_view tmpl,
                                   const std::map<std::string, std::string>& vars) {
    std::string out;
    out.reserve(tmpl.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        char c = tmpl[i];
        if (c != '$') {
            out += c;
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < tmpl.size() &&
               (std::isalnum(static_cast<unsigned char>(tmpl[j])) || tmpl[j] == '_'))
            ++j;
        std::string name(tmpl.substr(i + 1, j - i - 1));
        auto it = vars.find(name);
        if (name.empty() || it == vars.end()) {
            out += tmpl.substr(i, j - i);
        } else {
            out += it->second;
        }
        i = j;
    }
    return out;
}

}  // namespace vs2
