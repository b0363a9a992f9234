#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace matmcd::prompt {

using Values = std::map<std::string, std::string>;

/// Names of the `{{name}}` placeholders in a template.
std::set<std::string> placeholders(std::string_view tmpl);

/// Single-pass substitution of `{{name}}` slots. Substituted text is never
/// rescanned. Throws when a slot has no value or a value names no slot.
std::string render(std::string_view tmpl, const Values& values);

/// Missing placeholders among `required` (empty means the template is fine).
std::vector<std::string> lint(std::string_view tmpl, const std::vector<std::string>& required);

}  // namespace matmcd::prompt
