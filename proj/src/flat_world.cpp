#include "flat_world.hpp"

#include <algorithm>
#include <numeric>

#include "linamalg/error.hpp"

namespace linamalg::detail {

namespace {

constexpr std::int64_t kMaxNodes = 50'000'000;
constexpr std::int64_t kMaxInstances = 200'000'000;

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > kMaxNodes * 4) return r;
  }
  return r;
}

}  // namespace

FlatWorld::FlatWorld(const LinearTheory& theory, int num_vars) : num_vars_(num_vars) {
  const auto& sig = theory.signature();
  consts_ = sig.constant_names();
  ops_ = sig.op_names();
  num_atoms_ = num_vars_ + static_cast<int>(consts_.size());

  std::int64_t total = num_atoms_;
  for (const auto& op : ops_) {
    arity_.push_back(sig.arity(op));
    offset_.push_back(total);
    total += ipow(num_atoms_, arity_.back());
    if (total > kMaxNodes)
      fail(ErrorKind::budget_exceeded, "flat closure needs more than 5e7 terms");
  }
  root_.resize(total);
  std::iota(root_.begin(), root_.end(), std::int64_t{0});

  for (const auto& ax : theory.axioms()) add_axiom_instances(ax);

  while (true) {
    if (atoms_collapsed()) {
      trivial_ = true;
      break;
    }
    if (!apply_constant_congruence()) break;
  }
  for (std::int64_t i = 0; i < total; ++i) root_[i] = find(i);
}

int FlatWorld::const_atom(const std::string& c) const {
  auto it = std::lower_bound(consts_.begin(), consts_.end(), c);
  if (it == consts_.end() || *it != c) fail(ErrorKind::signature_mismatch, "unknown constant '" + c);
  return num_vars_ + static_cast<int>(it - consts_.begin());
}

std::int64_t FlatWorld::app_node(int op, std::span<const int> atoms) const {
  std::int64_t idx = 0;
  for (int a : atoms) idx = idx * num_atoms_ + a;
  return offset_[op] + idx;
}

std::int64_t FlatWorld::node_of(const Term& t, const std::map<std::string, int>& var_index) const {
  auto atom_of = [&](const Term& a) -> int {
    if (a.is_constant()) return const_atom(a.name());
    if (!a.is_variable()) fail(ErrorKind::linearity, "term is not flat: " + t.str());
    auto it = var_index.find(a.name());
    if (it == var_index.end() || it->second >= num_vars_)
      fail(ErrorKind::invariant_violation, "variable outside the flat world: " + a.name());
    return it->second;
  };
  if (t.is_atom()) return atom_of(t);
  auto op = std::lower_bound(ops_.begin(), ops_.end(), t.name());
  if (op == ops_.end() || *op != t.name())
    fail(ErrorKind::signature_mismatch, "unknown operation " + t.name());
  std::vector<int> atoms;
  for (const auto& a : t.args()) atoms.push_back(atom_of(a));
  return app_node(static_cast<int>(op - ops_.begin()), atoms);
}

void FlatWorld::decode(std::int64_t node, int& op, std::vector<int>& atoms) const {
  op = static_cast<int>(std::upper_bound(offset_.begin(), offset_.end(), node) - offset_.begin()) - 1;
  std::int64_t idx = node - offset_[op];
  atoms.assign(arity_[op], 0);
  for (int i = arity_[op] - 1; i >= 0; --i) {
    atoms[i] = static_cast<int>(idx % num_atoms_);
    idx /= num_atoms_;
  }
}

Term FlatWorld::term_of(std::int64_t node) const {
  auto atom_term = [&](int a) {
    if (a < num_vars_) return Term::var("x" + std::to_string(a));
    return Term::constant(consts_[a - num_vars_]);
  };
  if (node < num_atoms_) return atom_term(static_cast<int>(node));
  int op = 0;
  std::vector<int> atoms;
  decode(node, op, atoms);
  std::vector<Term> args;
  for (int a : atoms) args.push_back(atom_term(a));
  return Term::app(ops_[op], std::move(args));
}

const std::string& FlatWorld::const_rep(const std::string& c) const {
  auto r = root_[const_atom(c)];
  for (size_t j = 0; j < consts_.size(); ++j)
    if (root_[num_vars_ + j] == r) return consts_[j];
  return consts_[const_atom(c) - num_vars_];
}

std::int64_t FlatWorld::find(std::int64_t a) {
  while (root_[a] != a) {
    root_[a] = root_[root_[a]];
    a = root_[a];
  }
  return a;
}

bool FlatWorld::unite(std::int64_t a, std::int64_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  // Keep the smaller id as root so atoms stay representatives.
  if (b < a) std::swap(a, b);
  root_[b] = a;
  return true;
}

void FlatWorld::add_axiom_instances(const Equation& ax) {
  auto vars_set = variables_of(ax);
  std::vector<std::string> vars(vars_set.begin(), vars_set.end());
  std::map<std::string, int> var_pos;
  for (size_t i = 0; i < vars.size(); ++i) var_pos[vars[i]] = static_cast<int>(i);

  if (ipow(num_atoms_, static_cast<int>(vars.size())) > kMaxInstances)
    fail(ErrorKind::budget_exceeded, "too many axiom instances for " + ax.str());

  // Each side compiles to a list of (var position | -1, fixed atom).
  struct Arg {
    int var = -1;
    int atom = 0;
  };
  struct Side {
    int op = -1;
    std::vector<Arg> args;
  };
  auto compile = [&](const Term& t) {
    Side s;
    auto arg_of = [&](const Term& a) {
      if (a.is_variable()) return Arg{var_pos.at(a.name()), 0};
      return Arg{-1, const_atom(a.name())};
    };
    if (t.is_atom()) {
      s.args.push_back(arg_of(t));
    } else {
      s.op = static_cast<int>(std::lower_bound(ops_.begin(), ops_.end(), t.name()) - ops_.begin());
      for (const auto& a : t.args()) s.args.push_back(arg_of(a));
    }
    return s;
  };
  const Side lhs = compile(ax.lhs);
  const Side rhs = compile(ax.rhs);

  std::vector<int> sigma(vars.size(), 0);
  std::vector<int> atoms;
  auto node = [&](const Side& s) -> std::int64_t {
    atoms.clear();
    for (const auto& a : s.args) atoms.push_back(a.var >= 0 ? sigma[a.var] : a.atom);
    if (s.op < 0) return atoms[0];
    return app_node(s.op, atoms);
  };

  while (true) {
    unite(node(lhs), node(rhs));
    size_t i = 0;
    while (i < sigma.size() && ++sigma[i] == num_atoms_) sigma[i++] = 0;
    if (i == sigma.size()) break;
  }
}

bool FlatWorld::atoms_collapsed() {
  for (int i = 0; i < num_vars_; ++i)
    for (int j = 0; j < num_atoms_; ++j)
      if (i != j && find(i) == find(j)) return true;
  return false;
}

bool FlatWorld::apply_constant_congruence() {
  std::vector<int> rep(num_atoms_);
  bool any_merge = false;
  for (int a = 0; a < num_atoms_; ++a) {
    rep[a] = a;
    for (int b = num_vars_; b < a; ++b) {
      if (find(a) == find(b)) {
        rep[a] = b;
        any_merge = true;
        break;
      }
    }
  }
  if (!any_merge) return false;

  bool changed = false;
  std::vector<int> atoms;
  const auto total = static_cast<std::int64_t>(root_.size());
  for (std::int64_t n = num_atoms_; n < total; ++n) {
    int op = 0;
    decode(n, op, atoms);
    bool moved = false;
    for (int& a : atoms) {
      if (rep[a] != a) {
        a = rep[a];
        moved = true;
      }
    }
    if (moved) changed |= unite(n, app_node(op, atoms));
  }
  return changed;
}

}  // namespace linamalg::detail
