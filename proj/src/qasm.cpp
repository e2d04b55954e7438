#include "qct/qasm.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "qct/error.hpp"

namespace qct {

namespace {

struct Statement {
    std::string text;
    int line;
};

std::vector<Statement> split_statements(const std::string& text) {
    std::vector<Statement> stmts;
    std::string current;
    int line = 1, start_line = 1;
    bool in_comment = false;
    for (size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch == '\n') {
            ++line;
            in_comment = false;
            continue;
        }
        if (in_comment) continue;
        if (ch == '/' && i + 1 < text.size() && text[i + 1] == '/') {
            in_comment = true;
            ++i;
            continue;
        }
        if (ch == ';') {
            stmts.push_back({current, start_line});
            current.clear();
            start_line = line;
            continue;
        }
        if (current.empty() && std::isspace(static_cast<unsigned char>(ch))) {
            start_line = line;
            continue;
        }
        current.push_back(ch);
    }
    std::string tail = current;
    size_t pos = tail.find_last_not_of(" \t\r");
    if (pos != std::string::npos) {
        tail.resize(pos + 1);
        if (!tail.empty())
            throw Error(Errc::syntax_error,
                        "line " + std::to_string(start_line) + ": missing ';'", start_line);
    }
    return stmts;
}

class Cursor {
  public:
    Cursor(const std::string& s, int line) : s_(s), line_(line) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool done() {
        skip_ws();
        return pos_ >= s_.size();
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool eat(const char* lit) {
        skip_ws();
        const size_t n = std::strlen(lit);
        if (s_.compare(pos_, n, lit) == 0) {
            pos_ += n;
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) fail("expected identifier");
        return s_.substr(start, pos_ - start);
    }

    int integer() {
        skip_ws();
        int value = 0;
        auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), value);
        if (ec != std::errc()) fail("expected integer");
        pos_ = static_cast<size_t>(p - s_.data());
        return value;
    }

    double real() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                    s_[pos_] == '.' || s_[pos_] == '-' || s_[pos_] == '+' ||
                                    s_[pos_] == 'e' || s_[pos_] == 'E'))
            ++pos_;
        if (pos_ == start) fail("expected number");
        const std::string tok = s_.substr(start, pos_ - start);
        try {
            size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) fail("bad number '" + tok + "'");
            return v;
        } catch (const std::exception&) {
            fail("bad number '" + tok + "'");
        }
        return 0;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw Error(Errc::syntax_error, "line " + std::to_string(line_) + ": " + why, line_);
    }

    int line() const { return line_; }

  private:
    const std::string& s_;
    size_t pos_ = 0;
    int line_;
};

}  // namespace

Circuit parse_qasm(const std::string& text) {
    Circuit circ;
    bool have_qreg = false;
    std::string reg_name;

    for (const Statement& st : split_statements(text)) {
        Cursor cur(st.text, st.line);
        if (cur.done()) continue;

        std::string head = cur.ident();
        if (head == "OPENQASM" || head == "include" || head == "creg") continue;

        if (head == "qreg") {
            if (have_qreg) cur.fail("duplicate qreg declaration");
            reg_name = cur.ident();
            if (!cur.eat('[')) cur.fail("expected '['");
            const int n = cur.integer();
            if (!cur.eat(']')) cur.fail("expected ']'");
            if (n <= 0) cur.fail("register size must be positive");
            circ = Circuit(n);
            have_qreg = true;
            continue;
        }

        auto kind = gate_kind_from_name(head);
        if (!kind || *kind == GateKind::custom)
            throw Error(Errc::unknown_gate, "line " + std::to_string(st.line) + ": '" + head + "'");
        if (!have_qreg) cur.fail("gate before qreg declaration");

        std::vector<double> params;
        if (cur.eat('(')) {
            do {
                params.push_back(cur.real());
            } while (cur.eat(','));
            if (!cur.eat(')')) cur.fail("expected ')'");
        }

        std::vector<int> qubits;
        do {
            const std::string rn = cur.ident();
            if (rn != reg_name) cur.fail("unknown register '" + rn + "'");
            if (!cur.eat('[')) cur.fail("expected '['");
            const int q = cur.integer();
            if (!cur.eat(']')) cur.fail("expected ']'");
            qubits.push_back(q);
            if (*kind == GateKind::measure && cur.eat("->")) {
                cur.ident();  // classical register, ignored
                if (!cur.eat('[')) cur.fail("expected '['");
                cur.integer();
                if (!cur.eat(']')) cur.fail("expected ']'");
                break;
            }
        } while (cur.eat(','));
        if (!cur.done()) cur.fail("trailing characters");

        for (int q : qubits)
            if (q >= circ.num_qubits)
                throw Error(Errc::index_out_of_range,
                            "line " + std::to_string(st.line) + ": qubit " + std::to_string(q) +
                                " outside q[" + std::to_string(circ.num_qubits) + "]",
                            st.line);
        circ.append(Gate(*kind, std::move(qubits), std::move(params)));
    }

    if (!have_qreg) throw Error(Errc::syntax_error, "missing qreg declaration", 0);
    return circ;
}

std::string emit_qasm(const Circuit& c) {
    std::ostringstream out;
    out << "qreg q[" << c.num_qubits << "];\n";
    char buf[64];
    for (const Gate& g : c.gates) {
        if (g.kind == GateKind::custom)
            throw Error(Errc::unknown_gate, "custom gates have no qasm form");
        out << gate_name(g.kind);
        if (!g.params.empty()) {
            out << '(';
            for (size_t i = 0; i < g.params.size(); ++i) {
                std::snprintf(buf, sizeof buf, "%.17g", g.params[i]);
                out << (i ? "," : "") << buf;
            }
            out << ')';
        }
        out << ' ';
        for (size_t i = 0; i < g.qubits.size(); ++i)
            out << (i ? "," : "") << "q[" << g.qubits[i] << ']';
        out << ";\n";
    }
    return out.str();
}

}  // namespace qct
