#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qcdft/gate.hpp"

namespace qcdft {

/// Gate-level circuit IR. steps[s-1] holds the gates of step s (1-indexed
/// steps, matching the usual cycle numbering of step-resolved plots). A step
/// may touch each qubit at most once; depth is the number of stored steps.
/// Trailing gate-free steps are representable in memory but not in the text
/// format, so parse(serialize(c)) recovers depth up to the last gate.
struct Circuit {
  int n_qubits = 0;
  std::vector<std::vector<Gate>> steps;

  int depth() const { return static_cast<int>(steps.size()); }

  /// Appends a gate at 1-indexed step s, growing the step list as needed.
  void add(int s, const Gate& g) {
    if (s < 1) throw std::invalid_argument("Circuit::add: steps are 1-indexed");
    if (static_cast<std::size_t>(s) > steps.size()) steps.resize(s);
    steps[s - 1].push_back(g);
  }

  bool operator==(const Circuit&) const = default;
};

/// One invariant breach. step == 0 flags circuit-level problems.
struct Violation {
  int step = 0;
  std::string message;
};

namespace detail {

inline void check_gate(const Circuit& c, int step, const Gate& g,
                       std::vector<bool>& used, std::vector<Violation>& out) {
  auto check_qubit = [&](int q) {
    if (q < 0 || q >= c.n_qubits) {
      out.push_back({step, "qubit index " + std::to_string(q) + " out of range [0, " +
                               std::to_string(c.n_qubits) + ")"});
      return false;
    }
    if (used[q]) {
      out.push_back({step, "qubit " + std::to_string(q) + " used more than once in step"});
      return true;
    }
    used[q] = true;
    return true;
  };
  check_qubit(g.q0);
  if (is_two_qubit(g.kind)) {
    if (g.q1 == g.q0) {
      out.push_back({step, "two-qubit gate with identical operands (qubit " +
                               std::to_string(g.q0) + ")"});
    } else {
      check_qubit(g.q1);
    }
  } else if (g.q1 != -1) {
    out.push_back({step, "single-qubit gate carries a second qubit index"});
  }
  if (g.kind == GateKind::RX && !std::isfinite(g.theta)) {
    out.push_back({step, "rx angle is not finite"});
  }
}

}  // namespace detail

/// Reports every invariant violation; an empty list means the circuit is valid.
inline std::vector<Violation> validate(const Circuit& c) {
  std::vector<Violation> out;
  if (c.n_qubits < 1) {
    out.push_back({0, "circuit needs at least one qubit"});
    return out;
  }
  std::vector<bool> used(c.n_qubits);
  for (int s = 1; s <= c.depth(); ++s) {
    std::fill(used.begin(), used.end(), false);
    for (const Gate& g : c.steps[s - 1]) detail::check_gate(c, s, g, used, out);
  }
  return out;
}

inline bool is_valid(const Circuit& c) { return validate(c).empty(); }

/// Parse failure with 1-indexed source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

namespace detail {

struct Token {
  std::string_view text;
  int column = 0;  // 1-indexed
};

inline std::vector<Token> tokenize_line(std::string_view line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' &&
           line[i] != '#') {
      ++i;
    }
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

inline int parse_int(const Token& tok, int line, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
  if (ec != std::errc{} || ptr != tok.text.data() + tok.text.size()) {
    throw ParseError(line, tok.column, std::string("expected ") + what + ", got '" +
                                           std::string(tok.text) + "'");
  }
  return value;
}

inline double parse_double(std::string_view text, int line, int column) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(line, column, "bad angle '" + std::string(text) + "'");
  }
  return value;
}

inline void require_fresh_qubit(std::vector<bool>& used, int q, int n, int line, int column) {
  if (q < 0 || q >= n) {
    throw ParseError(line, column, "qubit index " + std::to_string(q) +
                                       " out of range [0, " + std::to_string(n) + ")");
  }
  if (used[q]) {
    throw ParseError(line, column,
                     "qubit " + std::to_string(q) + " already used in this step");
  }
  used[q] = true;
}

}  // namespace detail

/// Reads the native line format: a `qubits <N>` header followed by
/// `<step> <gate> <q> [<q2>]` lines with non-decreasing 1-indexed steps.
/// `#` starts a comment. Gates: h x y z s t sx sy rx(<radians>) cx cz.
inline Circuit parse_circuit(std::istream& in) {
  Circuit c;
  bool have_header = false;
  int last_step = 1;
  std::vector<bool> used;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = detail::tokenize_line(line);
    if (tokens.empty()) continue;
    if (!have_header) {
      if (tokens[0].text != "qubits") {
        throw ParseError(line_no, tokens[0].column, "missing 'qubits <N>' header");
      }
      if (tokens.size() != 2) {
        throw ParseError(line_no, tokens[0].column, "header must be 'qubits <N>'");
      }
      int n = detail::parse_int(tokens[1], line_no, "qubit count");
      if (n < 1) throw ParseError(line_no, tokens[1].column, "qubit count must be positive");
      c.n_qubits = n;
      used.assign(n, false);
      have_header = true;
      continue;
    }
    if (tokens.size() < 3 || tokens.size() > 4) {
      throw ParseError(line_no, tokens[0].column, "expected '<step> <gate> <q> [<q2>]'");
    }
    int step = detail::parse_int(tokens[0], line_no, "step number");
    if (step < 1) throw ParseError(line_no, tokens[0].column, "steps are 1-indexed");
    if (step < last_step) {
      throw ParseError(line_no, tokens[0].column, "steps must be non-decreasing");
    }
    if (step > last_step) {
      std::fill(used.begin(), used.end(), false);
      last_step = step;
    }

    std::string_view name = tokens[1].text;
    Gate g;
    if (name.size() > 3 && name.substr(0, 3) == "rx(" && name.back() == ')') {
      g = Gate::rx(detail::parse_double(name.substr(3, name.size() - 4), line_no,
                                        tokens[1].column),
                   0);
    } else {
      auto kind = gate_kind_from_name(name);
      if (!kind || *kind == GateKind::RX) {
        throw ParseError(line_no, tokens[1].column,
                         "unknown gate '" + std::string(name) + "'");
      }
      g.kind = *kind;
    }

    if (is_two_qubit(g.kind)) {
      if (tokens.size() != 4) {
        throw ParseError(line_no, tokens[1].column,
                         std::string(name) + " needs two qubit indices");
      }
      g.q0 = detail::parse_int(tokens[2], line_no, "qubit index");
      g.q1 = detail::parse_int(tokens[3], line_no, "qubit index");
      if (g.q1 == g.q0) {
        throw ParseError(line_no, tokens[3].column, "two-qubit gate operands must differ");
      }
      detail::require_fresh_qubit(used, g.q0, c.n_qubits, line_no, tokens[2].column);
      detail::require_fresh_qubit(used, g.q1, c.n_qubits, line_no, tokens[3].column);
    } else {
      if (tokens.size() != 3) {
        throw ParseError(line_no, tokens[1].column,
                         std::string(name) + " takes one qubit index");
      }
      g.q0 = detail::parse_int(tokens[2], line_no, "qubit index");
      detail::require_fresh_qubit(used, g.q0, c.n_qubits, line_no, tokens[2].column);
    }
    c.add(step, g);
  }
  if (!have_header) throw ParseError(line_no + 1, 1, "missing 'qubits <N>' header");
  return c;
}

inline Circuit parse_circuit(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_circuit(in);
}

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Canonical native rendering; parse(serialize(c)) equals c for circuits
/// without trailing empty steps. Angles use shortest round-trip notation.
inline void serialize_circuit(const Circuit& c, std::ostream& out) {
  out << "qubits " << c.n_qubits << "\n";
  for (int s = 1; s <= c.depth(); ++s) {
    for (const Gate& g : c.steps[s - 1]) {
      out << s << ' ';
      if (g.kind == GateKind::RX) {
        out << "rx(" << detail::format_double(g.theta) << ')';
      } else {
        out << gate_name(g.kind);
      }
      out << ' ' << g.q0;
      if (is_two_qubit(g.kind)) out << ' ' << g.q1;
      out << '\n';
    }
  }
}

inline std::string serialize_circuit(const Circuit& c) {
  std::ostringstream out;
  serialize_circuit(c, out);
  return out.str();
}

/// Reads the GRCS convention: first non-comment line is the qubit count, then
/// `<cycle> <name> <q> [<q2>]` lines with 0-indexed cycles (mapped to step
/// cycle+1) and names h, t, cz, x_1_2 (-> sx), y_1_2 (-> sy). With strip_h
/// set, Hadamard lines are dropped.
inline Circuit parse_grcs(std::istream& in, bool strip_h = false) {
  Circuit c;
  bool have_count = false;
  std::string line;
  int line_no = 0;
  std::vector<std::vector<bool>> used_by_step;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = detail::tokenize_line(line);
    if (tokens.empty()) continue;
    if (!have_count) {
      if (tokens.size() != 1) {
        throw ParseError(line_no, tokens[0].column, "expected the qubit count alone");
      }
      int n = detail::parse_int(tokens[0], line_no, "qubit count");
      if (n < 1) throw ParseError(line_no, tokens[0].column, "qubit count must be positive");
      c.n_qubits = n;
      have_count = true;
      continue;
    }
    if (tokens.size() < 3 || tokens.size() > 4) {
      throw ParseError(line_no, tokens[0].column, "expected '<cycle> <name> <q> [<q2>]'");
    }
    int cycle = detail::parse_int(tokens[0], line_no, "cycle number");
    if (cycle < 0) throw ParseError(line_no, tokens[0].column, "cycles are 0-indexed");
    int step = cycle + 1;

    std::string_view name = tokens[1].text;
    GateKind kind;
    if (name == "h") {
      kind = GateKind::H;
    } else if (name == "t") {
      kind = GateKind::T;
    } else if (name == "cz") {
      kind = GateKind::CZ;
    } else if (name == "x_1_2") {
      kind = GateKind::SX;
    } else if (name == "y_1_2") {
      kind = GateKind::SY;
    } else {
      throw ParseError(line_no, tokens[1].column, "unknown gate '" + std::string(name) + "'");
    }
    if (strip_h && kind == GateKind::H) continue;

    Gate g;
    g.kind = kind;
    if (static_cast<std::size_t>(step) > used_by_step.size()) {
      used_by_step.resize(step, std::vector<bool>(c.n_qubits, false));
    }
    auto& used = used_by_step[step - 1];
    if (kind == GateKind::CZ) {
      if (tokens.size() != 4) {
        throw ParseError(line_no, tokens[1].column, "cz needs two qubit indices");
      }
      g.q0 = detail::parse_int(tokens[2], line_no, "qubit index");
      g.q1 = detail::parse_int(tokens[3], line_no, "qubit index");
      if (g.q1 == g.q0) {
        throw ParseError(line_no, tokens[3].column, "cz operands must differ");
      }
      detail::require_fresh_qubit(used, g.q0, c.n_qubits, line_no, tokens[2].column);
      detail::require_fresh_qubit(used, g.q1, c.n_qubits, line_no, tokens[3].column);
    } else {
      if (tokens.size() != 3) {
        throw ParseError(line_no, tokens[1].column,
                         std::string(name) + " takes one qubit index");
      }
      g.q0 = detail::parse_int(tokens[2], line_no, "qubit index");
      detail::require_fresh_qubit(used, g.q0, c.n_qubits, line_no, tokens[2].column);
    }
    c.add(step, g);
  }
  if (!have_count) throw ParseError(line_no + 1, 1, "missing qubit count line");
  return c;
}

inline Circuit parse_grcs(std::string_view text, bool strip_h = false) {
  std::istringstream in{std::string(text)};
  return parse_grcs(in, strip_h);
}

}  // namespace qcdft
