#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "treeperm/engine.hpp"
#include "treeperm/scalar.hpp"

namespace treeperm {

/// FNV-1a over the raw input bytes, as 16 hex digits.
inline std::string input_digest(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xf];
  return out;
}

/// Stats object for one engine run. `result` is the exact decimal string.
inline nlohmann::json stats_json(std::string_view function, std::size_t n, std::size_t order, const EngineStats& s,
                                 const std::string& result) {
  return {
      {"function", function},
      {"n", n},
      {"order", order},
      {"width_multi_part", s.width_multi_part},
      {"width_single_part", s.width_single_part},
      {"nodes", s.nodes},
      {"max_bag", s.max_bag},
      {"peak_cells", s.peak_cells},
      {"ring_mults", s.ring_mults},
      {"result", result},
  };
}

} // namespace treeperm
