#include "matmcd/prompt/template.hpp"

#include "matmcd/util/error.hpp"

namespace matmcd::prompt {

std::set<std::string> placeholders(std::string_view tmpl) {
    std::set<std::string> names;
    std::size_t pos = 0;
    while ((pos = tmpl.find("{{", pos)) != std::string_view::npos) {
        const std::size_t end = tmpl.find("}}", pos + 2);
        if (end == std::string_view::npos) break;
        names.emplace(tmpl.substr(pos + 2, end - pos - 2));
        pos = end + 2;
    }
    return names;
}

std::string render(std::string_view tmpl, const Values& values) {
    std::string out;
    out.reserve(tmpl.size() * 2);
    std::set<std::string> used;
    std::size_t pos = 0;
    while (true) {
        const std::size_t open = tmpl.find("{{", pos);
        if (open == std::string_view::npos) {
            out.append(tmpl.substr(pos));
            break;
        }
        const std::size_t close = tmpl.find("}}", open + 2);
        if (close == std::string_view::npos) throw Error("unterminated placeholder in prompt template");
        out.append(tmpl.substr(pos, open - pos));
        const std::string name(tmpl.substr(open + 2, close - open - 2));
        auto it = values.find(name);
        if (it == values.end()) throw Error("no value for prompt placeholder '" + name + "'");
        out.append(it->second);
        used.insert(name);
        pos = close + 2;
    }
    for (const auto& [name, _] : values) {
        if (!used.count(name)) throw Error("value '" + name + "' matches no placeholder in the template");
    }
    return out;
}

std::vector<std::string> lint(std::string_view tmpl, const std::vector<std::string>& required) {
    const auto present = placeholders(tmpl);
    std::vector<std::string> missing;
    for (const auto& name : required) {
        if (!present.count(name)) missing.push_back(name);
    }
    return missing;
}

}  // namespace matmcd::prompt
