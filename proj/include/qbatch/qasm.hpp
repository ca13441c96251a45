#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qbatch/errors.hpp"

namespace qbatch::qasm {

enum class Gate { h, x, rx, rz, cx, cz };

bool gate_has_angle(Gate g);
bool gate_is_two_qubit(Gate g);
const char* gate_name(Gate g);

struct GateOp {
    Gate gate = Gate::h;
    double angle = 0.0;  // rx / rz only
    int q0 = 0;
    int q1 = -1;  // cx / cz only
};

// Gate-level circuit form. Measurement is all-or-none and terminal.
struct CircuitIR {
    int num_qubits = 0;
    std::vector<GateOp> ops;
    bool measured = false;

    // Structural equality; rotation angles compared by bit pattern.
    bool operator==(const CircuitIR& other) const;

    // Throws ParameterError on invariant violations (index range, identical
    // two-qubit operands, non-finite angles).
    void validate() const;

    int gate_count() const { return static_cast<int>(ops.size()); }
};

// Syntax or support error with source location.
struct ParseError : Error {
    ParseError(int line, int col, const std::string& message)
        : Error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " +
                message),
          line(line),
          col(col) {}
    int line;
    int col;
};

// Renders OpenQASM 2.0 text. Angles are printed with 17 significant digits so
// parse(emit(c)) reproduces the exact IR.
std::string emit(const CircuitIR& c);

// Parses the OpenQASM 2.0 subset: qreg/creg, h, x, rx, rz, cx, cz, terminal
// measure, line comments. Anything else is rejected with a location.
CircuitIR parse(const std::string& text);

}  // namespace qbatch::qasm
