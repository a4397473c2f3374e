#pragma once

#include <string>
#include <string_view>

namespace cgaedit {

enum class OutputKind { cga_json, se3_json, mat4_json };

std::string_view to_string(OutputKind kind);
// Throws ConfigError.
OutputKind output_kind_from_string(std::string_view name);

}  // namespace cgaedit
