#include "linamalg/io.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "linamalg/error.hpp"

namespace linamalg {

namespace {

bool is_symbol_char(char c) {
  switch (c) {
    case '(': case ')': case ',': case '=': case '\'': case '#': case '/': case ':':
    case ' ': case '\t': case '\r': case '\n':
      return false;
    default:
      return true;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

class TermParser {
 public:
  explicit TermParser(std::string_view s) : s_(s) {}

  Term term() {
    skip();
    if (peek() == '\'') {
      ++pos_;
      return Term::constant(ident());
    }
    std::string name = ident();
    skip();
    if (peek() != '(') return Term::var(std::move(name));
    ++pos_;
    std::vector<Term> args;
    while (true) {
      args.push_back(term());
      skip();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect(')');
      break;
    }
    return Term::app(std::move(name), std::move(args));
  }

  void expect(char c) {
    skip();
    if (peek() != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  void finish() {
    skip();
    if (pos_ != s_.size()) error("trailing input");
  }

  std::string ident() {
    skip();
    const size_t start = pos_;
    while (pos_ < s_.size() && is_symbol_char(s_[pos_])) ++pos_;
    if (pos_ == start) error("expected a symbol");
    return std::string(s_.substr(start, pos_ - start));
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::parse, what + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(s_) + "'");
  }

  std::string_view s_;
  size_t pos_ = 0;
};

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

[[noreturn]] void line_error(int line, const std::string& what) {
  fail(ErrorKind::parse, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

}  // namespace

Term parse_term(std::string_view text) {
  TermParser p(text);
  Term t = p.term();
  p.finish();
  return t;
}

Equation parse_equation(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) fail(ErrorKind::parse, "expected 'lhs = rhs' in '" + std::string(text) + "'");
  return {parse_term(text.substr(0, eq)), parse_term(text.substr(eq + 1))};
}

Theory parse_theory(std::string_view text) {
  Theory th;
  bool have_sig = false;
  bool in_axioms = false;
  int line_no = 0;
  for (auto raw : lines_of(text)) {
    ++line_no;
    const auto line = strip_comment(raw);
    if (line.empty()) continue;
    try {
      if (starts_with(line, "signature:")) {
        if (have_sig) line_error(line_no, "duplicate signature line");
        have_sig = true;
        in_axioms = false;
        for (const auto& item : split_list(line.substr(10))) {
          if (item.front() == '\'') {
            th.signature.add_constant(item.substr(1));
            continue;
          }
          const auto slash = item.find('/');
          if (slash == std::string::npos) line_error(line_no, "expected name/arity, got '" + item + "'");
          int arity = 0;
          try {
            size_t used = 0;
            arity = std::stoi(item.substr(slash + 1), &used);
            if (used != item.size() - slash - 1) throw std::invalid_argument(item);
          } catch (const std::logic_error&) {
            line_error(line_no, "bad arity in '" + item + "'");
          }
          th.signature.add_operation(item.substr(0, slash), arity);
        }
      } else if (starts_with(line, "axioms:")) {
        if (!trim(line.substr(7)).empty()) line_error(line_no, "axioms go on the following lines");
        in_axioms = true;
      } else if (in_axioms) {
        th.axioms.push_back(parse_equation(line));
      } else {
        line_error(line_no, "unexpected '" + std::string(line) + "'");
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::parse && starts_with(e.what(), "line ")) throw;
      line_error(line_no, e.what());
    }
  }
  if (!have_sig) fail(ErrorKind::parse, "missing signature line");
  for (const auto& eq : th.axioms) {
    check_term(th.signature, eq.lhs);
    check_term(th.signature, eq.rhs);
  }
  return th;
}

std::string format_theory(const Theory& theory) {
  std::ostringstream out;
  out << "signature:";
  bool first = true;
  for (const auto& [op, arity] : theory.signature.operations()) {
    out << (first ? " " : ", ") << op << '/' << arity;
    first = false;
  }
  for (const auto& c : theory.signature.constants()) {
    out << (first ? " '" : ", '") << c;
    first = false;
  }
  out << "\naxioms:\n";
  for (const auto& eq : theory.axioms) out << "  " << eq.str() << '\n';
  return out.str();
}

FiniteAlgebra parse_algebra(std::string_view text, const Signature& sig) {
  std::vector<std::string> carrier;
  std::map<std::string, int> index;
  std::map<std::string, int> consts;
  std::vector<std::vector<int>> tables;
  const auto ops = sig.op_names();
  std::vector<bool> table_seen(ops.size(), false);
  int current = -1;
  int line_no = 0;

  auto element = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) line_error(line_no, "unknown element '" + name + "'");
    return it->second;
  };

  for (auto raw : lines_of(text)) {
    ++line_no;
    const auto line = strip_comment(raw);
    if (line.empty()) continue;
    if (starts_with(line, "elements:")) {
      if (!carrier.empty()) line_error(line_no, "duplicate elements line");
      carrier = split_list(line.substr(9));
      if (carrier.empty()) line_error(line_no, "empty carrier");
      for (const auto& e : carrier) {
        if (!index.emplace(e, static_cast<int>(index.size())).second)
          line_error(line_no, "duplicate element '" + e + "'");
        if (!std::all_of(e.begin(), e.end(), is_symbol_char)) line_error(line_no, "bad element name '" + e + "'");
      }
      for (const auto& op : ops) tables.emplace_back(table_size(static_cast<int>(carrier.size()), sig.arity(op)), -1);
      continue;
    }
    if (carrier.empty()) line_error(line_no, "the elements line must come first");
    if (starts_with(line, "const")) {
      current = -1;
      auto rest = trim(line.substr(5));
      const auto eq = rest.find('=');
      if (rest.empty() || rest.front() != '\'' || eq == std::string_view::npos)
        line_error(line_no, "expected const 'c = e");
      const std::string name(trim(rest.substr(1, eq - 1)));
      const std::string value(trim(rest.substr(eq + 1)));
      if (!sig.has_constant(name)) line_error(line_no, "unknown constant '" + name);
      if (!consts.emplace(name, element(value)).second) line_error(line_no, "constant '" + name + " given twice");
      continue;
    }
    if (starts_with(line, "table")) {
      auto rest = trim(line.substr(5));
      if (rest.empty() || rest.back() != ':') line_error(line_no, "expected 'table f:'");
      const std::string op(trim(rest.substr(0, rest.size() - 1)));
      if (!sig.has_operation(op)) line_error(line_no, "unknown operation " + op);
      current = sig.op_index(op);
      if (table_seen[current]) line_error(line_no, "table " + op + " given twice");
      table_seen[current] = true;
      continue;
    }
    if (current < 0) line_error(line_no, "table entry outside a table block");
    std::optional<Equation> parsed;
    try {
      parsed = parse_equation(line);
    } catch (const Error& e) {
      line_error(line_no, e.what());
    }
    const Equation& eq = *parsed;
    if (!eq.lhs.is_application() || eq.lhs.name() != ops[current] || !eq.rhs.is_variable())
      line_error(line_no, "expected " + ops[current] + "(e1,...) = e");
    std::vector<int> args;
    for (const auto& a : eq.lhs.args()) {
      if (!a.is_variable()) line_error(line_no, "table arguments must be elements");
      args.push_back(element(a.name()));
    }
    if (static_cast<int>(args.size()) != sig.arity(ops[current]))
      line_error(line_no, "wrong number of arguments for " + ops[current]);
    int& slot = tables[current][tuple_index(args, static_cast<int>(carrier.size()))];
    if (slot >= 0) line_error(line_no, "entry given twice");
    slot = element(eq.rhs.name());
  }
  if (carrier.empty()) fail(ErrorKind::parse, "missing elements line");
  for (size_t o = 0; o < ops.size(); ++o) {
    if (std::count(tables[o].begin(), tables[o].end(), -1) != 0)
      fail(ErrorKind::parse, "table " + ops[o] + " is partial");
  }
  for (const auto& c : sig.constants())
    if (!consts.count(c)) fail(ErrorKind::parse, "constant '" + c + " has no interpretation");
  return FiniteAlgebra(sig, std::move(carrier), std::move(tables), std::move(consts));
}

std::string format_algebra(const FiniteAlgebra& input, bool canonical) {
  FiniteAlgebra alg = input;
  if (canonical) {
    auto sorted = alg.carrier();
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<int>> tables;
    const int n = alg.size();
    std::vector<int> perm(n);  // sorted position -> original position
    for (int i = 0; i < n; ++i) perm[i] = *alg.index_of(sorted[i]);
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[perm[i]] = i;
    const auto ops = alg.signature().op_names();
    for (size_t o = 0; o < ops.size(); ++o) {
      const int arity = alg.signature().arity(ops[o]);
      std::vector<int> table(table_size(n, arity));
      std::vector<int> args(arity);
      for (std::int64_t t = 0; t < static_cast<std::int64_t>(table.size()); ++t) {
        tuple_at(t, n, args);
        for (auto& a : args) a = perm[a];
        table[t] = inv[alg.apply(static_cast<int>(o), args)];
      }
      tables.push_back(std::move(table));
    }
    std::map<std::string, int> consts;
    for (const auto& [c, v] : alg.constants()) consts[c] = inv[v];
    alg = FiniteAlgebra(alg.signature(), sorted, std::move(tables), std::move(consts));
  }
  std::ostringstream out;
  out << "elements:";
  for (size_t i = 0; i < alg.carrier().size(); ++i) out << (i ? ", " : " ") << alg.carrier()[i];
  out << '\n';
  for (const auto& [c, v] : alg.constants()) out << "const '" << c << " = " << alg.name(v) << '\n';
  const auto ops = alg.signature().op_names();
  const int n = alg.size();
  for (size_t o = 0; o < ops.size(); ++o) {
    out << "table " << ops[o] << ":\n";
    const int arity = alg.signature().arity(ops[o]);
    std::vector<int> args(arity);
    for (std::int64_t t = 0; t < table_size(n, arity); ++t) {
      tuple_at(t, n, args);
      out << "  " << ops[o] << '(';
      for (int k = 0; k < arity; ++k) out << (k ? "," : "") << alg.name(args[k]);
      out << ") = " << alg.name(alg.table(static_cast<int>(o))[t]) << '\n';
    }
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::parse, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::precondition, "cannot write " + path);
  out << content;
}

}  // namespace linamalg
