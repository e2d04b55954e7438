#pragma once

#include <string>

#include "qct/circuit.hpp"

namespace qct {

// Text format (one statement per line, `//` comments, whitespace-insensitive):
//
//   program   := { statement }
//   statement := "qreg" ID "[" INT "]" ";"
//              | NAME [ "(" REAL { "," REAL } ")" ] qref { "," qref } ";"
//              | "measure" qref [ "->" cref ] ";"
//   qref      := ID "[" INT "]"
//
// A single qreg declaration must precede the gates. `OPENQASM ...;`,
// `include ...;` and `creg ...;` statements are accepted and ignored. Gate
// names are the fixed vocabulary of GateKind minus `custom`. Angles are
// decimal literals in radians.

Circuit parse_qasm(const std::string& text);

// Emits the canonical form: `qreg q[n];` then one gate per line. Custom gates
// have no text form and raise unknown_gate; rebase them first.
std::string emit_qasm(const Circuit& c);

}  // namespace qct
