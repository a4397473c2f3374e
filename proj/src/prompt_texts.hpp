#pragma once

#include <string_view>

namespace cgaedit::prompts {

extern const std::string_view simple_cga;
extern const std::string_view shenlong_cga;
extern const std::string_view euclidean_mat4;
extern const std::string_view compact_se3;
extern const std::string_view simple_cga_verbose;

}  // namespace cgaedit::prompts
