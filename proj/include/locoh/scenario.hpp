#pragma once

#include <cctype>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "locoh/error.hpp"
#include "locoh/fp.hpp"

// Declarative scenario files: one directive per line, '#' starts a comment.
// The grammar is documented in docs/scenario-format.md.  Parsing is purely
// structural; name resolution and cap checks happen when a context is built.

namespace locoh {

struct ParseError : Error {
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

struct ValidationError : Error {
  using Error::Error;
};

struct GroupDef {
  std::string name;
  std::string kind;  // symmetric | cyclic | dihedral | generators
  std::size_t size = 0;
  std::vector<std::string> generator_texts;
  std::size_t degree = 0;  // 0: infer from the generator cycles
  std::size_t line = 0;
};

struct ModuleDef {
  std::string name;
  std::string op;  // trivial | permutation | regular | dual | tensor | hom |
                   // sum | restrict | augmentation | matrices
  std::vector<std::string> args;
  std::size_t dim = 1;              // trivial, matrices
  std::vector<std::vector<u32>> entries;  // matrices: one flat block per generator
  std::size_t line = 0;
};

struct ChainDef {
  std::string name;
  std::string ambient;
  std::vector<std::string> levels;
  std::size_t line = 0;
};

struct TaskDef {
  std::string kind;
  std::vector<std::string> args;
  std::size_t max_degree = 0;
  bool has_max_degree = false;
  std::size_t degree = 0;
  bool has_degree = false;
  std::size_t count = 0;
  bool has_count = false;
  bool split = false;
  std::size_t line = 0;
};

struct Scenario {
  u32 characteristic = 0;
  u64 seed = 0;
  std::size_t max_degree = 3;
  std::size_t order_cap = 1000;
  std::vector<GroupDef> groups;
  std::vector<ModuleDef> modules;
  std::vector<ChainDef> chains;
  std::vector<TaskDef> tasks;

  // Normal form used for hashing: every directive reserialized with single
  // spaces, comments and blank lines gone, effective settings included.
  std::string canonical_text() const {
    std::ostringstream out;
    out << "characteristic " << characteristic << "\n";
    out << "seed " << seed << "\n";
    out << "max_degree " << max_degree << "\n";
    out << "order_cap " << order_cap << "\n";
    for (const auto& g : groups) {
      out << "group " << g.name << " " << g.kind;
      if (g.kind == "generators") {
        for (std::size_t i = 0; i < g.generator_texts.size(); ++i)
          out << (i ? " ; " : " ") << g.generator_texts[i];
        if (g.degree) out << " degree " << g.degree;
      } else {
        out << " " << g.size;
      }
      out << "\n";
    }
    for (const auto& m : modules) {
      out << "module " << m.name << " " << m.op;
      for (const auto& a : m.args) out << " " << a;
      if (m.op == "trivial" && m.dim != 1) out << " " << m.dim;
      if (m.op == "matrices") {
        out << " " << m.dim;
        for (std::size_t i = 0; i < m.entries.size(); ++i) {
          if (i) out << " |";
          for (u32 e : m.entries[i]) out << " " << e;
        }
      }
      out << "\n";
    }
    for (const auto& c : chains) {
      out << "chain " << c.name << " " << c.ambient;
      for (const auto& l : c.levels) out << " " << l;
      out << "\n";
    }
    for (const auto& t : tasks) out << task_line(t) << "\n";
    return out.str();
  }

  static std::string task_line(const TaskDef& t) {
    std::ostringstream out;
    out << "task " << t.kind;
    for (const auto& a : t.args) out << " " << a;
    if (t.split) out << " split";
    if (t.has_degree) out << " degree " << t.degree;
    if (t.has_max_degree) out << " max_degree " << t.max_degree;
    if (t.has_count) out << " count " << t.count;
    return out.str();
  }
};

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

inline std::vector<Token> tokenize_line(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r' && line[i] != '#')
      ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline u64 parse_number(const Token& tok, std::size_t line) {
  u64 value = 0;
  if (tok.text.empty()) throw ParseError(line, tok.column, "expected a number");
  for (char c : tok.text) {
    if (c < '0' || c > '9')
      throw ParseError(line, tok.column,
                       "expected a number, found \"" + tok.text + "\"");
    value = value * 10 + u64(c - '0');
  }
  return value;
}

inline bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      return false;
  return std::isalpha(static_cast<unsigned char>(s[0])) != 0;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  using detail::Token;
  Scenario sc;
  bool have_characteristic = false;
  std::vector<std::string> names;
  auto claim_name = [&names](const Token& tok, std::size_t ln) {
    if (!detail::valid_name(tok.text))
      throw ParseError(ln, tok.column, "invalid name \"" + tok.text + "\"");
    for (const auto& n : names)
      if (n == tok.text)
        throw ParseError(ln, tok.column,
                         "duplicate definition of \"" + tok.text + "\"");
    names.push_back(tok.text);
  };

  std::istringstream in(text);
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    auto toks = detail::tokenize_line(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0].text;
    auto need = [&](std::size_t k, const char* what) -> const Token& {
      if (toks.size() <= k)
        throw ParseError(ln, line.size() + 1,
                         std::string("expected ") + what + " after \"" +
                             (k ? toks[k - 1].text : head) + "\"");
      return toks[k];
    };

    if (head == "characteristic") {
      if (have_characteristic)
        throw ParseError(ln, toks[0].column, "characteristic declared twice");
      sc.characteristic = u32(detail::parse_number(need(1, "a prime"), ln));
      have_characteristic = true;
    } else if (head == "seed") {
      sc.seed = detail::parse_number(need(1, "a number"), ln);
    } else if (head == "max_degree") {
      sc.max_degree = detail::parse_number(need(1, "a number"), ln);
    } else if (head == "order_cap") {
      sc.order_cap = detail::parse_number(need(1, "a number"), ln);
    } else if (head == "group") {
      GroupDef g;
      g.line = ln;
      claim_name(need(1, "a name"), ln);
      g.name = toks[1].text;
      g.kind = need(2, "a group kind").text;
      if (g.kind == "symmetric" || g.kind == "cyclic" || g.kind == "dihedral") {
        g.size = detail::parse_number(need(3, "a size"), ln);
        if (toks.size() > 4)
          throw ParseError(ln, toks[4].column, "unexpected trailing tokens");
      } else if (g.kind == "generators") {
        std::string current;
        for (std::size_t i = 3; i < toks.size(); ++i) {
          if (toks[i].text == "degree") {
            g.degree =
                std::size_t(detail::parse_number(need(i + 1, "a degree"), ln));
            if (toks.size() > i + 2)
              throw ParseError(ln, toks[i + 2].column,
                               "unexpected trailing tokens");
            break;
          }
          if (toks[i].text == ";") {
            if (current.empty())
              throw ParseError(ln, toks[i].column, "empty generator");
            g.generator_texts.push_back(current);
            current.clear();
          } else {
            current += current.empty() ? "" : " ";
            current += toks[i].text;
          }
        }
        if (!current.empty()) g.generator_texts.push_back(current);
        if (g.generator_texts.empty())
          throw ParseError(ln, toks[2].column,
                           "a generator list needs at least one cycle");
      } else {
        throw ParseError(ln, toks[2].column,
                         "unknown group kind \"" + g.kind + "\"");
      }
      sc.groups.push_back(std::move(g));
    } else if (head == "module") {
      ModuleDef m;
      m.line = ln;
      claim_name(need(1, "a name"), ln);
      m.name = toks[1].text;
      m.op = need(2, "a module operation").text;
      const auto unary_ops = {"permutation", "regular", "dual", "augmentation"};
      const auto binary_ops = {"tensor", "hom", "sum", "restrict"};
      bool matched = false;
      for (const char* op : unary_ops)
        if (m.op == op) {
          m.args.push_back(need(3, "a name").text);
          if (toks.size() > 4)
            throw ParseError(ln, toks[4].column, "unexpected trailing tokens");
          matched = true;
        }
      for (const char* op : binary_ops)
        if (m.op == op) {
          m.args.push_back(need(3, "a name").text);
          m.args.push_back(need(4, "a name").text);
          if (toks.size() > 5)
            throw ParseError(ln, toks[5].column, "unexpected trailing tokens");
          matched = true;
        }
      if (m.op == "trivial") {
        m.args.push_back(need(3, "a group name").text);
        if (toks.size() > 4) m.dim = detail::parse_number(toks[4], ln);
        if (toks.size() > 5)
          throw ParseError(ln, toks[5].column, "unexpected trailing tokens");
        matched = true;
      }
      if (m.op == "matrices") {
        m.args.push_back(need(3, "a group name").text);
        m.dim = detail::parse_number(need(4, "a dimension"), ln);
        if (m.dim == 0)
          throw ParseError(ln, toks[4].column, "dimension must be positive");
        std::vector<u32> block;
        for (std::size_t i = 5; i < toks.size(); ++i) {
          if (toks[i].text == "|") {
            m.entries.push_back(std::move(block));
            block.clear();
          } else {
            block.push_back(u32(detail::parse_number(toks[i], ln)));
          }
        }
        m.entries.push_back(std::move(block));
        for (const auto& b : m.entries)
          if (b.size() != m.dim * m.dim)
            throw ParseError(ln, toks[toks.size() - 1].column,
                             "each generator block needs " +
                                 std::to_string(m.dim * m.dim) + " entries");
        matched = true;
      }
      if (!matched)
        throw ParseError(ln, toks[2].column,
                         "unknown module operation \"" + m.op + "\"");
      sc.modules.push_back(std::move(m));
    } else if (head == "chain") {
      ChainDef c;
      c.line = ln;
      claim_name(need(1, "a name"), ln);
      c.name = toks[1].text;
      c.ambient = need(2, "an ambient group name").text;
      for (std::size_t i = 3; i < toks.size(); ++i)
        c.levels.push_back(toks[i].text);
      if (c.levels.empty())
        throw ParseError(ln, line.size() + 1,
                         "a chain needs at least one level");
      sc.chains.push_back(std::move(c));
    } else if (head == "task") {
      TaskDef t;
      t.line = ln;
      t.kind = need(1, "a task kind").text;
      for (std::size_t i = 2; i < toks.size(); ++i) {
        const std::string& w = toks[i].text;
        if (w == "max_degree") {
          t.max_degree =
              std::size_t(detail::parse_number(need(i + 1, "a number"), ln));
          t.has_max_degree = true;
          ++i;
        } else if (w == "degree") {
          t.degree =
              std::size_t(detail::parse_number(need(i + 1, "a number"), ln));
          t.has_degree = true;
          ++i;
        } else if (w == "count") {
          t.count =
              std::size_t(detail::parse_number(need(i + 1, "a number"), ln));
          t.has_count = true;
          ++i;
        } else if (w == "split") {
          t.split = true;
        } else {
          t.args.push_back(w);
        }
      }
      sc.tasks.push_back(std::move(t));
    } else {
      throw ParseError(ln, toks[0].column,
                       "unknown directive \"" + head + "\"");
    }
  }
  if (!have_characteristic)
    throw ValidationError("scenario does not declare a characteristic");
  try {
    check_modulus(sc.characteristic);
  } catch (const Error& e) {
    throw ValidationError(std::string("characteristic: ") + e.what());
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scenario file \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace locoh
