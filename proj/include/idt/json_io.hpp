#pragma once

#include <string>

#include "idt/quantum.hpp"

namespace idt {

// JSON schema shared by the CLI and the test suite. Complex numbers are
// [re, im] pairs, matrices are row-major nested lists, and every object
// carries explicit "kind" and "dim" fields ("outcomes" where applicable).
// Instrument branches are Choi matrices in the library convention (output
// factor first, unnormalized). Parsers throw std::invalid_argument on
// malformed input and run the object validators before returning.

std::string povm_to_json(const Povm& e);
Povm povm_from_json(const std::string& text);

std::string instrument_to_json(const Instrument& inst);
Instrument instrument_from_json(const std::string& text);

std::string density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const std::string& text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace idt
