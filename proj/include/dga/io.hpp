#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dga {

/// Throw Error{Io} on failure.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

/// Non-blank lines with trailing whitespace removed.
std::vector<std::string> read_lines(const std::string& path);

std::string sha256_hex(std::string_view data);

}  // namespace dga
