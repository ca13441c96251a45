#include "qbatch/qasm.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>

#include "qbatch/util.hpp"

namespace qbatch::qasm {

bool gate_has_angle(Gate g) { return g == Gate::rx || g == Gate::rz; }
bool gate_is_two_qubit(Gate g) { return g == Gate::cx || g == Gate::cz; }

const char* gate_name(Gate g) {
    switch (g) {
        case Gate::h: return "h";
        case Gate::x: return "x";
        case Gate::rx: return "rx";
        case Gate::rz: return "rz";
        case Gate::cx: return "cx";
        case Gate::cz: return "cz";
    }
    return "?";
}

bool CircuitIR::operator==(const CircuitIR& other) const {
    if (num_qubits != other.num_qubits || measured != other.measured ||
        ops.size() != other.ops.size()) {
        return false;
    }
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const auto& a = ops[i];
        const auto& b = other.ops[i];
        if (a.gate != b.gate || a.q0 != b.q0 || a.q1 != b.q1) return false;
        if (std::bit_cast<std::uint64_t>(a.angle) != std::bit_cast<std::uint64_t>(b.angle)) {
            return false;
        }
    }
    return true;
}

void CircuitIR::validate() const {
    if (num_qubits < 1) throw ParameterError("circuit: needs at least one qubit");
    for (const auto& op : ops) {
        if (op.q0 < 0 || op.q0 >= num_qubits) {
            throw ParameterError("circuit: qubit index out of range");
        }
        if (gate_is_two_qubit(op.gate)) {
            if (op.q1 < 0 || op.q1 >= num_qubits) {
                throw ParameterError("circuit: qubit index out of range");
            }
            if (op.q0 == op.q1) {
                throw ParameterError("circuit: two-qubit gate with identical operands");
            }
        }
        if (gate_has_angle(op.gate) && !std::isfinite(op.angle)) {
            throw ParameterError("circuit: non-finite rotation angle");
        }
    }
}

std::string emit(const CircuitIR& c) {
    c.validate();
    std::string out;
    out.reserve(64 + c.ops.size() * 24 + static_cast<std::size_t>(c.num_qubits) * 28);
    out += "OPENQASM 2.0;\n";
    out += "include \"qelib1.inc\";\n";
    out += "qreg q[" + std::to_string(c.num_qubits) + "];\n";
    out += "creg c[" + std::to_string(c.num_qubits) + "];\n";
    for (const auto& op : c.ops) {
        out += gate_name(op.gate);
        if (gate_has_angle(op.gate)) {
            out += "(";
            out += format_double(op.angle);
            out += ")";
        }
        out += " q[" + std::to_string(op.q0) + "]";
        if (gate_is_two_qubit(op.gate)) out += ",q[" + std::to_string(op.q1) + "]";
        out += ";\n";
    }
    if (c.measured) {
        for (int i = 0; i < c.num_qubits; ++i) {
            out += "measure q[" + std::to_string(i) + "] -> c[" + std::to_string(i) + "];\n";
        }
    }
    return out;
}

namespace {

enum class Tok { ident, number, string, punct, arrow, eof };

struct Token {
    Tok kind = Tok::eof;
    std::string text;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_space_and_comments();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) {
            t.kind = Tok::eof;
            return t;
        }
        const char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Tok::ident;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_')) {
                t.text += advance();
            }
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            t.kind = Tok::number;
            t.text = lex_number();
            return t;
        }
        if (c == '"') {
            t.kind = Tok::string;
            advance();
            while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') {
                t.text += advance();
            }
            if (pos_ >= text_.size() || text_[pos_] != '"') {
                throw ParseError(t.line, t.col, "unterminated string literal");
            }
            advance();
            return t;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            t.kind = Tok::arrow;
            t.text = "->";
            advance();
            advance();
            return t;
        }
        t.kind = Tok::punct;
        t.text = std::string(1, advance());
        return t;
    }

    std::string lex_number() {
        std::string s;
        auto take_digits = [&] {
            while (pos_ < text_.size() &&
                   std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                s += advance();
            }
        };
        take_digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            s += advance();
            take_digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            s += advance();
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                s += advance();
            }
            take_digits();
        }
        return s;
    }

private:
    char advance() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else {
                return;
            }
        }
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { shift(); }

    CircuitIR run() {
        expect_ident("OPENQASM");
        const Token version = expect(Tok::number, "version number");
        if (version.text != "2.0") {
            throw ParseError(version.line, version.col,
                             "unsupported OPENQASM version '" + version.text + "'");
        }
        expect_punct(";");

        CircuitIR circuit;
        bool saw_qreg = false;
        bool saw_measure = false;
        int measured_mask_count = 0;
        std::vector<bool> measured;

        while (cur_.kind != Tok::eof) {
            if (cur_.kind != Tok::ident) {
                throw ParseError(cur_.line, cur_.col,
                                 "expected statement, found '" + cur_.text + "'");
            }
            const Token head = cur_;
            shift();
            if (head.text == "include") {
                expect(Tok::string, "include file name");
                expect_punct(";");
                continue;
            }
            if (head.text == "qreg" || head.text == "creg") {
                const Token name = expect(Tok::ident, "register name");
                expect_punct("[");
                const Token size = expect(Tok::number, "register size");
                expect_punct("]");
                expect_punct(";");
                const int sz = parse_int(size);
                if (head.text == "qreg") {
                    if (saw_qreg) {
                        throw ParseError(head.line, head.col, "multiple qreg declarations");
                    }
                    saw_qreg = true;
                    qreg_name_ = name.text;
                    if (sz < 1) {
                        throw ParseError(size.line, size.col, "qreg size must be >= 1");
                    }
                    circuit.num_qubits = sz;
                    measured.assign(sz, false);
                } else {
                    creg_name_ = name.text;
                    creg_size_ = sz;
                }
                continue;
            }
            if (head.text == "measure") {
                if (!saw_qreg) {
                    throw ParseError(head.line, head.col, "measure before qreg");
                }
                if (creg_name_.empty()) {
                    throw ParseError(head.line, head.col, "measure requires a creg");
                }
                parse_measure(head, circuit, measured, measured_mask_count);
                saw_measure = true;
                continue;
            }
            // Gate statement.
            if (saw_measure) {
                throw ParseError(head.line, head.col,
                                 "gate after measurement; measurement must be terminal");
            }
            if (!saw_qreg) {
                throw ParseError(head.line, head.col, "gate before qreg declaration");
            }
            parse_gate(head, circuit);
        }

        if (!saw_qreg) throw ParseError(1, 1, "missing qreg declaration");
        if (saw_measure) {
            if (measured_mask_count != circuit.num_qubits) {
                throw ParseError(1, 1, "measurement must cover all qubits");
            }
            circuit.measured = true;
        }
        circuit.validate();
        return circuit;
    }

private:
    static const std::map<std::string, Gate>& gate_table() {
        static const std::map<std::string, Gate> table{
            {"h", Gate::h},   {"x", Gate::x},   {"rx", Gate::rx},
            {"rz", Gate::rz}, {"cx", Gate::cx}, {"cz", Gate::cz},
        };
        return table;
    }

    void parse_gate(const Token& head, CircuitIR& circuit) {
        const auto it = gate_table().find(head.text);
        if (it == gate_table().end()) {
            throw ParseError(head.line, head.col,
                             "unsupported gate '" + head.text + "'");
        }
        GateOp op;
        op.gate = it->second;
        if (gate_has_angle(op.gate)) {
            expect_punct("(");
            op.angle = parse_signed_real();
            expect_punct(")");
        } else if (cur_.kind == Tok::punct && cur_.text == "(") {
            throw ParseError(cur_.line, cur_.col,
                             "gate '" + head.text + "' takes no parameters");
        }
        op.q0 = parse_qubit_operand(circuit.num_qubits);
        if (gate_is_two_qubit(op.gate)) {
            expect_punct(",");
            op.q1 = parse_qubit_operand(circuit.num_qubits);
            if (op.q1 == op.q0) {
                throw ParseError(cur_.line, cur_.col,
                                 "two-qubit gate operands must be distinct");
            }
        }
        expect_punct(";");
        circuit.ops.push_back(op);
    }

    void parse_measure(const Token& head, CircuitIR& circuit, std::vector<bool>& measured,
                       int& measured_count) {
        // Whole-register form: measure q -> c;
        const Token src = expect(Tok::ident, "quantum register");
        if (src.text != qreg_name_) {
            throw ParseError(src.line, src.col, "unknown register '" + src.text + "'");
        }
        if (cur_.kind == Tok::arrow) {
            shift();
            const Token dst = expect(Tok::ident, "classical register");
            if (dst.text != creg_name_) {
                throw ParseError(dst.line, dst.col, "unknown register '" + dst.text + "'");
            }
            expect_punct(";");
            if (creg_size_ < circuit.num_qubits) {
                throw ParseError(head.line, head.col, "creg smaller than qreg");
            }
            for (int i = 0; i < circuit.num_qubits; ++i) {
                if (!measured[i]) {
                    measured[i] = true;
                    ++measured_count;
                }
            }
            return;
        }
        expect_punct("[");
        const Token idx = expect(Tok::number, "qubit index");
        expect_punct("]");
        const int q = parse_int(idx);
        if (q < 0 || q >= circuit.num_qubits) {
            throw ParseError(idx.line, idx.col,
                             "qubit index " + idx.text + " out of range");
        }
        if (cur_.kind != Tok::arrow) {
            throw ParseError(cur_.line, cur_.col, "expected '->' in measure");
        }
        shift();
        const Token dst = expect(Tok::ident, "classical register");
        if (dst.text != creg_name_) {
            throw ParseError(dst.line, dst.col, "unknown register '" + dst.text + "'");
        }
        expect_punct("[");
        const Token cidx = expect(Tok::number, "classical bit index");
        expect_punct("]");
        expect_punct(";");
        if (parse_int(cidx) != q) {
            throw ParseError(cidx.line, cidx.col,
                             "measure must map q[i] -> c[i]");
        }
        if (!measured[q]) {
            measured[q] = true;
            ++measured_count;
        }
    }

    int parse_qubit_operand(int num_qubits) {
        const Token reg = expect(Tok::ident, "quantum register");
        if (reg.text != qreg_name_) {
            throw ParseError(reg.line, reg.col, "unknown register '" + reg.text + "'");
        }
        expect_punct("[");
        const Token idx = expect(Tok::number, "qubit index");
        expect_punct("]");
        const int q = parse_int(idx);
        if (q < 0 || q >= num_qubits) {
            throw ParseError(idx.line, idx.col,
                             "qubit index " + idx.text + " out of range");
        }
        return q;
    }

    double parse_signed_real() {
        double sign = 1.0;
        while (cur_.kind == Tok::punct && (cur_.text == "-" || cur_.text == "+")) {
            if (cur_.text == "-") sign = -sign;
            shift();
        }
        const Token num = expect(Tok::number, "numeric angle");
        try {
            return sign * std::stod(num.text);
        } catch (const std::exception&) {
            throw ParseError(num.line, num.col, "malformed number '" + num.text + "'");
        }
    }

    int parse_int(const Token& t) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(t.text, &used);
            if (used != t.text.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ParseError(t.line, t.col, "expected integer, found '" + t.text + "'");
        }
    }

    Token expect(Tok kind, const std::string& what) {
        if (cur_.kind != kind) {
            throw ParseError(cur_.line, cur_.col,
                             "expected " + what + ", found '" + cur_.text + "'");
        }
        Token t = cur_;
        shift();
        return t;
    }

    void expect_ident(const std::string& name) {
        if (cur_.kind != Tok::ident || cur_.text != name) {
            throw ParseError(cur_.line, cur_.col,
                             "expected '" + name + "', found '" + cur_.text + "'");
        }
        shift();
    }

    void expect_punct(const std::string& p) {
        if (cur_.kind != Tok::punct || cur_.text != p) {
            throw ParseError(cur_.line, cur_.col,
                             "expected '" + p + "', found '" + cur_.text + "'");
        }
        shift();
    }

    void shift() { cur_ = lexer_.next(); }

    Lexer lexer_;
    Token cur_;
    std::string qreg_name_;
    std::string creg_name_;
    int creg_size_ = 0;
};

}  // namespace

CircuitIR parse(const std::string& text) { return Parser(text).run(); }

}  // namespace qbatch::qasm
