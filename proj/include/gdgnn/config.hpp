#pragma once

#include <map>
#include <string>

namespace gdgnn {

// Flat key=value text. '#' starts a comment; blank lines are skipped.
// Later assignments win, which is also how CLI overrides are layered on top.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in, const std::string& origin);
KeyValues load_key_values(const std::string& path);

}  // namespace gdgnn
