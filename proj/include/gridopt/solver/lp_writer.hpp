#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "gridopt/core/error.hpp"
#include "gridopt/solver/standard_form.hpp"

namespace gridopt::solver {

// Fixed 12-significant-digit rendering; negative zero prints as 0.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Maps a name onto [A-Za-z0-9_()%,.]: brackets become parentheses, any other
// character becomes '_'. A leading digit or '.' gets a '_' prefix.
inline std::string sanitize_name(const std::string& name) {
  std::string out;
  out.reserve(name.size() + 1);
  for (char ch : name) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || ch == '_' || ch == '(' || ch == ')' || ch == '%' || ch == ',' || ch == '.') {
      out += ch;
    } else if (ch == '[') {
      out += '(';
    } else if (ch == ']') {
      out += ')';
    } else {
      out += '_';
    }
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out.front())) || out.front() == '.') {
    out.insert(out.begin(), '_');
  }
  return out;
}

// Sanitized, collision-free names: later duplicates get "_2", "_3", ...
inline std::vector<std::string> unique_sanitized(const std::vector<std::string>& names,
                                                 std::set<std::string>& taken) {
  std::vector<std::string> out;
  out.reserve(names.size());
  for (const auto& raw : names) {
    auto base = sanitize_name(raw);
    auto candidate = base;
    for (int k = 2; taken.contains(candidate); ++k) candidate = base + "_" + std::to_string(k);
    taken.insert(candidate);
    out.push_back(std::move(candidate));
  }
  return out;
}

struct LpNames {
  std::vector<std::string> columns;
  std::vector<std::string> rows;
};

inline LpNames lp_names(const StandardFormLP& lp) {
  std::set<std::string> taken{"obj"};
  LpNames names;
  names.columns = unique_sanitized(lp.col_names, taken);
  names.rows = unique_sanitized(lp.row_names, taken);
  return names;
}

namespace detail {

class TermWriter {
 public:
  explicit TermWriter(std::string& out) : out_(out) {}

  void term(double coef, const std::string& name) {
    if (count_ > 0 && count_ % 8 == 0) out_ += "\n   ";
    if (coef < 0) {
      out_ += count_ == 0 ? "- " : " - ";
      coef = -coef;
    } else if (count_ > 0) {
      out_ += " + ";
    }
    out_ += format_number(coef);
    out_ += ' ';
    out_ += name;
    ++count_;
  }

  void constant(double c) {
    if (c == 0.0) return;
    if (c < 0) out_ += count_ == 0 ? "- " : " - ";
    else if (count_ > 0) out_ += " + ";
    out_ += format_number(std::abs(c));
    ++count_;
  }

  int count() const { return count_; }

 private:
  std::string& out_;
  int count_ = 0;
};

}  // namespace detail

// CPLEX-style LP text. Deterministic for a given StandardFormLP.
inline std::string write_lp_string(const StandardFormLP& lp) {
  const auto names = lp_names(lp);
  std::string out = "\\ gridopt LP export\nMinimize\n obj:";
  {
    std::string line;
    detail::TermWriter w(line);
    for (std::size_t j = 0; j < lp.num_cols(); ++j) {
      if (lp.objective[j] != 0.0) w.term(lp.objective[j], names.columns[j]);
    }
    w.constant(lp.objective_constant);
    if (!line.empty()) out += ' ' + line;
  }
  out += "\nSubject To\n";
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    std::string line;
    detail::TermWriter w(line);
    for (const auto& e : lp.rows[i]) w.term(e.value, names.columns[static_cast<std::size_t>(e.col)]);
    if (w.count() == 0 && lp.num_cols() > 0) w.term(0.0, names.columns[0]);
    const char* op = lp.senses[i] == Sense::LessEqual ? " <= " : lp.senses[i] == Sense::GreaterEqual ? " >= " : " = ";
    out += ' ' + names.rows[i] + ": " + line + op + format_number(lp.rhs[i]) + '\n';
  }
  out += "Bounds\n";
  for (std::size_t j = 0; j < lp.num_cols(); ++j) {
    double lo = lp.lower[j], hi = lp.upper[j];
    const auto& n = names.columns[j];
    if (lo == 0.0 && hi == kInf) continue;
    if (lo == -kInf && hi == kInf) {
      out += ' ' + n + " free\n";
    } else if (hi == kInf) {
      out += ' ' + n + " >= " + format_number(lo) + '\n';
    } else if (lo == hi) {
      out += ' ' + n + " = " + format_number(lo) + '\n';
    } else {
      out += ' ' + format_number(lo) + " <= " + n + " <= " + format_number(hi) + '\n';
    }
  }
  if (lp.has_integers()) {
    out += "Generals\n";
    int on_line = 0;
    for (std::size_t j = 0; j < lp.num_cols(); ++j) {
      if (!lp.integer[j]) continue;
      out += ' ';
      out += names.columns[j];
      if (++on_line == 8) {
        out += '\n';
        on_line = 0;
      }
    }
    if (on_line) out += '\n';
  }
  out += "End\n";
  return out;
}

inline void write_lp_file(const StandardFormLP& lp, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::ConfigError, "cannot write " + path.string());
  f << write_lp_string(lp);
}

}  // namespace gridopt::solver
