#include "vpn/fixtures.hpp"

#include "vpn/error.hpp"

namespace vpn {

namespace detail {
const std::map<std::string, std::string_view>& embedded_models();
}

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : detail::embedded_models()) out.push_back(name);
  return out;
}

std::string_view fixture_text(std::string_view name) {
  const auto& models = detail::embedded_models();
  auto it = models.find(std::string(name));
  if (it == models.end()) throw Error(ErrorCode::ParseError, "no fixture named " + std::string(name));
  return it->second;
}

ModelDocument fixture(std::string_view name) { return parse_model_or_throw(fixture_text(name)); }

Fixtures fixtures() {
  Fixtures f{fixture("e1"), fixture("e2"), {}};
  for (const char* m : {"e1_unreachable_final", "double_send", "stranded_token"}) f.mutants.emplace(m, fixture(m));
  return f;
}

}  // namespace vpn
