#pragma once

#include <string>
#include <string_view>

namespace matmcd::da {

/// Plain text of an HTML page: tags, comments and script/style bodies
/// removed, entities decoded, whitespace collapsed. Never throws.
std::string deformat_html(std::string_view html);

/// Decodes named (&amp; &lt; &gt; &quot; &apos; &nbsp;) and numeric entities.
std::string decode_entities(std::string_view s);

}  // namespace matmcd::da
