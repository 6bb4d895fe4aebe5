#include "vpn/symbol.hpp"

#include <deque>
#include <mutex>
#include <unordered_map>

#include "vpn/error.hpp"

namespace vpn {

namespace {

struct NameTable {
  std::mutex mutex;
  std::deque<std::string> storage;  // stable addresses
  std::unordered_map<std::string_view, const std::string*> index;
};

NameTable& table() {
  static NameTable t;
  return t;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
  auto& t = table();
  std::lock_guard lock(t.mutex);
  if (auto it = t.index.find(name); it != t.index.end()) return Symbol(it->second);
  const std::string& stored = t.storage.emplace_back(name);
  t.index.emplace(std::string_view(stored), &stored);
  return Symbol(&stored);
}

Symbol epsilon() {
  static const Symbol eps = Symbol::intern("eps");
  return eps;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::UnknownTransition: return "UnknownTransition";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::UnknownConfiguration: return "UnknownConfiguration";
    case ErrorCode::NotEnabled: return "NotEnabled";
    case ErrorCode::InvalidTrace: return "InvalidTrace";
    case ErrorCode::InvalidNet: return "InvalidNet";
    case ErrorCode::KindConflict: return "KindConflict";
    case ErrorCode::ClassConflict: return "ClassConflict";
    case ErrorCode::SharedPlace: return "SharedPlace";
    case ErrorCode::SharedTransition: return "SharedTransition";
    case ErrorCode::MissingTransition: return "MissingTransition";
    case ErrorCode::NoInterfaceDeclared: return "NoInterfaceDeclared";
    case ErrorCode::MissingFinalPlaces: return "MissingFinalPlaces";
    case ErrorCode::MissingInterfaceSet: return "MissingInterfaceSet";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace vpn
