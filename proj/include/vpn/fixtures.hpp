#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vpn/model_io.hpp"

namespace vpn {

/// Models shipped with the library (sources under models/).
std::vector<std::string> fixture_names();
/// Throws Error{ParseError} for an unknown name.
std::string_view fixture_text(std::string_view name);
ModelDocument fixture(std::string_view name);

struct Fixtures {
  ModelDocument e1;
  ModelDocument e2;
  std::map<std::string, ModelDocument> mutants;  // e1_unreachable_final, double_send, stranded_token
};
Fixtures fixtures();

}  // namespace vpn
