#pragma once

#include <string>
#include <vector>

namespace fcm::harness {

//! Names of the built-in benchmark cases.
std::vector<std::string> builtin_case_names();

//! JSON text of a built-in case (throws ConfigError for unknown names).
std::string builtin_case_json(const std::string& name);

bool is_builtin_case(const std::string& name);

}  // namespace fcm::harness
