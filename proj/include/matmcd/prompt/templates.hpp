#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace matmcd::prompt {

/// A named prompt template and the placeholders it must expose.
struct TemplateSpec {
    std::string_view name;
    std::string_view text;
    std::vector<std::string> required;
};

// Agent prompts. Placeholders use {{name}}.
extern const std::string_view kSearchTemplate;
extern const std::string_view kSummaryRagTemplate;
extern const std::string_view kSummaryLogTemplate;
extern const std::string_view kKnowledgeTemplate;
extern const std::string_view kConstraintTemplate;
extern const std::string_view kSearchRepeatNotice;

const std::vector<TemplateSpec>& all_templates();

}  // namespace matmcd::prompt
