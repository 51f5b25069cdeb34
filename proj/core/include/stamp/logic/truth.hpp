#pragma once

#include <cstdint>
#include <string_view>

namespace stamp::logic {

/// Kleene three-valued truth. Unknown marks an atom annotated with `?`.
enum class Truth : std::uint8_t { False = 0, Unknown = 1, True = 2 };

constexpr Truth from_bool(bool b) { return b ? Truth::True : Truth::False; }

constexpr Truth operator!(Truth t) {
  switch (t) {
  case Truth::False: return Truth::True;
  case Truth::True: return Truth::False;
  default: return Truth::Unknown;
  }
}

/// Kleene conjunction is the minimum under False < Unknown < True.
constexpr Truth operator&&(Truth a, Truth b) { return a < b ? a : b; }
constexpr Truth operator||(Truth a, Truth b) { return a < b ? b : a; }

constexpr std::string_view to_string(Truth t) {
  switch (t) {
  case Truth::False: return "false";
  case Truth::True: return "true";
  default: return "unknown";
  }
}

} // namespace stamp::logic
