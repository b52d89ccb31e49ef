#ifndef TWOSPIN_JSON_IO_HPP
#define TWOSPIN_JSON_IO_HPP

#include <string>

#include "twospin/spin_system.hpp"

namespace twospin {

// Graph document schema:
//   {"beta": float, "gamma": float,
//    "vertices": [{"id": int, "lambda": float}, ...],
//    "edges": [[int, int], ...],
//    "pins": [{"id": int, "spin": 0|1}, ...]}   // optional
SpinSystem system_from_json_text(const std::string& text);
SpinSystem system_from_json_file(const std::string& path);
std::string system_to_json_text(const SpinSystem& sys);

}  // namespace twospin

#endif
