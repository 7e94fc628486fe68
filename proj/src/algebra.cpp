#include "linamalg/algebra.hpp"

#include <algorithm>

#include "linamalg/error.hpp"

namespace linamalg {

std::int64_t table_size(int n, int arity) {
  std::int64_t s = 1;
  for (int i = 0; i < arity; ++i) s *= n;
  return s;
}

std::int64_t tuple_index(std::span<const int> args, int n) {
  std::int64_t idx = 0;
  for (int a : args) idx = idx * n + a;
  return idx;
}

void tuple_at(std::int64_t index, int n, std::vector<int>& out) {
  for (int i = static_cast<int>(out.size()) - 1; i >= 0; --i) {
    out[i] = static_cast<int>(index % n);
    index /= n;
  }
}

FiniteAlgebra::FiniteAlgebra(Signature sig, std::vector<std::string> carrier,
                             std::vector<std::vector<int>> tables, std::map<std::string, int> constants)
    : sig_(std::move(sig)), carrier_(std::move(carrier)), tables_(std::move(tables)), consts_(std::move(constants)) {
  if (carrier_.empty()) fail(ErrorKind::precondition, "algebras must have a nonempty carrier");
  for (size_t i = 0; i < carrier_.size(); ++i)
    if (!index_.emplace(carrier_[i], static_cast<int>(i)).second)
      fail(ErrorKind::precondition, "duplicate element " + carrier_[i]);
  const int n = size();
  const auto ops = sig_.op_names();
  if (tables_.size() != ops.size()) fail(ErrorKind::signature_mismatch, "table count does not match signature");
  for (size_t o = 0; o < ops.size(); ++o) {
    if (static_cast<std::int64_t>(tables_[o].size()) != table_size(n, sig_.arity(ops[o])))
      fail(ErrorKind::signature_mismatch, "table for " + ops[o] + " is not total");
    for (int v : tables_[o])
      if (v < 0 || v >= n) fail(ErrorKind::precondition, "table for " + ops[o] + " leaves the carrier");
  }
  for (const auto& c : sig_.constants()) {
    auto it = consts_.find(c);
    if (it == consts_.end()) fail(ErrorKind::signature_mismatch, "constant '" + c + " is not interpreted");
    if (it->second < 0 || it->second >= n) fail(ErrorKind::precondition, "constant '" + c + " leaves the carrier");
  }
  if (consts_.size() != sig_.constants().size())
    fail(ErrorKind::signature_mismatch, "interpretation of an unknown constant");
}

std::optional<int> FiniteAlgebra::index_of(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int FiniteAlgebra::apply(int op, std::span<const int> args) const {
  return tables_[op][tuple_index(args, size())];
}

int FiniteAlgebra::constant(const std::string& c) const {
  auto it = consts_.find(c);
  if (it == consts_.end()) fail(ErrorKind::signature_mismatch, "unknown constant '" + c);
  return it->second;
}

FiniteAlgebra FiniteAlgebra::reduct(const Signature& sub) const {
  std::vector<std::vector<int>> tables;
  for (const auto& op : sub.op_names()) {
    if (!sig_.has_operation(op) || sig_.arity(op) != sub.arity(op))
      fail(ErrorKind::signature_mismatch, "reduct to a non-subsignature");
    tables.push_back(tables_[sig_.op_index(op)]);
  }
  std::map<std::string, int> consts;
  for (const auto& c : sub.constants()) consts[c] = constant(c);
  return FiniteAlgebra(sub, carrier_, std::move(tables), std::move(consts));
}

FiniteAlgebra FiniteAlgebra::renamed(const std::map<std::string, std::string>& names) const {
  std::vector<std::string> carrier = carrier_;
  for (auto& e : carrier) {
    auto it = names.find(e);
    if (it != names.end()) e = it->second;
  }
  return FiniteAlgebra(sig_, std::move(carrier), tables_, consts_);
}

FiniteAlgebra singleton(const Signature& sig, const std::string& element) {
  std::vector<std::vector<int>> tables;
  tables.assign(sig.operations().size(), std::vector<int>(1, 0));
  std::map<std::string, int> consts;
  for (const auto& c : sig.constants()) consts[c] = 0;
  return FiniteAlgebra(sig, {element}, std::move(tables), std::move(consts));
}

int evaluate_index(const FiniteAlgebra& alg, const Term& t, const std::map<std::string, int>& a) {
  switch (t.kind()) {
    case Term::Kind::variable: {
      auto it = a.find(t.name());
      if (it == a.end()) fail(ErrorKind::precondition, "no binding for variable " + t.name());
      return it->second;
    }
    case Term::Kind::constant:
      return alg.constant(t.name());
    case Term::Kind::application: {
      std::vector<int> args;
      args.reserve(t.args().size());
      for (const auto& s : t.args()) args.push_back(evaluate_index(alg, s, a));
      return alg.apply(alg.signature().op_index(t.name()), args);
    }
  }
  return -1;
}

std::string evaluate(const FiniteAlgebra& alg, const Term& t, const Assignment& a) {
  std::map<std::string, int> idx;
  for (const auto& [v, e] : a) {
    auto i = alg.index_of(e);
    if (!i) fail(ErrorKind::precondition, "element " + e + " is not in the carrier");
    idx[v] = *i;
  }
  return alg.name(evaluate_index(alg, t, idx));
}

bool satisfies(const FiniteAlgebra& alg, const Equation& eq) {
  check_term(alg.signature(), eq.lhs);
  check_term(alg.signature(), eq.rhs);
  const auto vars_set = variables_of(eq);
  const std::vector<std::string> vars(vars_set.begin(), vars_set.end());
  const int n = alg.size();
  std::vector<int> assign(vars.size(), 0);
  std::map<std::string, int> a;
  while (true) {
    for (size_t i = 0; i < vars.size(); ++i) a[vars[i]] = assign[i];
    if (evaluate_index(alg, eq.lhs, a) != evaluate_index(alg, eq.rhs, a)) return false;
    size_t i = 0;
    while (i < assign.size() && ++assign[i] == n) assign[i++] = 0;
    if (i == assign.size()) return true;
  }
}

std::optional<Equation> first_failing_axiom(const FiniteAlgebra& alg, const Theory& theory) {
  if (!(alg.signature() == theory.signature))
    fail(ErrorKind::signature_mismatch, "algebra and theory have different signatures");
  for (const auto& ax : theory.axioms)
    if (!satisfies(alg, ax)) return ax;
  return std::nullopt;
}

bool is_model(const FiniteAlgebra& alg, const Theory& theory) {
  return !first_failing_axiom(alg, theory).has_value();
}

bool extends(const FiniteAlgebra& d, const FiniteAlgebra& part) {
  if (!(d.signature() == part.signature())) return false;
  std::vector<int> into(part.size());
  for (int i = 0; i < part.size(); ++i) {
    auto j = d.index_of(part.name(i));
    if (!j) return false;
    into[i] = *j;
  }
  for (const auto& [c, v] : part.constants())
    if (d.constant(c) != into[v]) return false;
  const auto ops = part.signature().op_names();
  for (size_t o = 0; o < ops.size(); ++o) {
    const int arity = part.signature().arity(ops[o]);
    std::vector<int> args(arity), mapped(arity);
    for (std::int64_t t = 0; t < table_size(part.size(), arity); ++t) {
      tuple_at(t, part.size(), args);
      for (int k = 0; k < arity; ++k) mapped[k] = into[args[k]];
      if (d.apply(static_cast<int>(o), mapped) != into[part.table(static_cast<int>(o))[t]]) return false;
    }
  }
  return true;
}

bool is_subalgebra(const FiniteAlgebra& c, const FiniteAlgebra& a) {
  if (!(c.signature() == a.signature()))
    fail(ErrorKind::signature_mismatch, "subalgebra test across different signatures");
  return extends(a, c);
}

std::vector<std::vector<std::string>> closed_subsets(const FiniteAlgebra& a) {
  const int n = a.size();
  if (n > 20) fail(ErrorKind::budget_exceeded, "closed_subsets on more than 20 elements");
  std::vector<std::vector<std::string>> out;
  const auto ops = a.signature().op_names();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    bool closed = true;
    for (const auto& [_, v] : a.constants())
      if (!(mask >> v & 1u)) closed = false;
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1u) members.push_back(i);
    for (size_t o = 0; closed && o < ops.size(); ++o) {
      const int arity = a.signature().arity(ops[o]);
      std::vector<int> pick(arity, 0), args(arity);
      while (closed) {
        for (int k = 0; k < arity; ++k) args[k] = members[pick[k]];
        if (!(mask >> a.apply(static_cast<int>(o), args) & 1u)) closed = false;
        int k = arity - 1;
        while (k >= 0 && ++pick[k] == static_cast<int>(members.size())) pick[k--] = 0;
        if (k < 0) break;
      }
    }
    if (!closed) continue;
    std::vector<std::string> names;
    for (int i : members) names.push_back(a.name(i));
    out.push_back(std::move(names));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  return out;
}

FiniteAlgebra subalgebra_on(const FiniteAlgebra& a, const std::vector<std::string>& elements) {
  std::vector<int> pos;
  for (const auto& e : elements) {
    auto i = a.index_of(e);
    if (!i) fail(ErrorKind::precondition, "element " + e + " is not in the carrier");
    pos.push_back(*i);
  }
  std::map<int, int> back;
  for (size_t i = 0; i < pos.size(); ++i) back[pos[i]] = static_cast<int>(i);
  const int m = static_cast<int>(pos.size());
  std::vector<std::vector<int>> tables;
  const auto ops = a.signature().op_names();
  for (size_t o = 0; o < ops.size(); ++o) {
    const int arity = a.signature().arity(ops[o]);
    std::vector<int> table(table_size(m, arity));
    std::vector<int> args(arity), mapped(arity);
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(table.size()); ++t) {
      tuple_at(t, m, args);
      for (int k = 0; k < arity; ++k) mapped[k] = pos[args[k]];
      auto it = back.find(a.apply(static_cast<int>(o), mapped));
      if (it == back.end()) fail(ErrorKind::subalgebra_failure, "subset is not closed under " + ops[o]);
      table[t] = it->second;
    }
    tables.push_back(std::move(table));
  }
  std::map<std::string, int> consts;
  for (const auto& [c, v] : a.constants()) {
    auto it = back.find(v);
    if (it == back.end()) fail(ErrorKind::subalgebra_failure, "subset misses constant '" + c);
    consts[c] = it->second;
  }
  return FiniteAlgebra(a.signature(), elements, std::move(tables), std::move(consts));
}

namespace {

/// Backtracking over injective maps a -> d; `emit` returns false to stop.
template <typename Emit>
void search_embeddings(const FiniteAlgebra& a, const FiniteAlgebra& d, const ElementMap& partial, Emit&& emit) {
  if (!(a.signature() == d.signature()))
    fail(ErrorKind::signature_mismatch, "embedding search across different signatures");
  const int n = a.size();
  std::vector<int> h(n, -1);
  std::vector<bool> used(d.size(), false);
  auto bind = [&](int i, int j) {
    if (h[i] == j) return true;
    if (h[i] != -1 || used[j]) return false;
    h[i] = j;
    used[j] = true;
    return true;
  };
  for (const auto& [x, y] : partial) {
    auto i = a.index_of(x);
    auto j = d.index_of(y);
    if (!i || !j || !bind(*i, *j)) return;
  }
  for (const auto& [c, v] : a.constants())
    if (!bind(v, d.constant(c))) return;

  const auto ops = a.signature().op_names();
  auto consistent = [&]() {
    for (size_t o = 0; o < ops.size(); ++o) {
      const int arity = a.signature().arity(ops[o]);
      std::vector<int> args(arity), mapped(arity);
      for (std::int64_t t = 0; t < table_size(n, arity); ++t) {
        tuple_at(t, n, args);
        bool ready = true;
        for (int k = 0; k < arity && ready; ++k) {
          if (h[args[k]] < 0) ready = false;
          else mapped[k] = h[args[k]];
        }
        if (!ready) continue;
        const int r = h[a.table(static_cast<int>(o))[t]];
        if (r >= 0 && r != d.apply(static_cast<int>(o), mapped)) return false;
      }
    }
    return true;
  };
  if (!consistent()) return;

  bool stop = false;
  auto rec = [&](auto&& self, int i) -> void {
    if (stop) return;
    while (i < n && h[i] >= 0) ++i;
    if (i == n) {
      ElementMap out;
      for (int k = 0; k < n; ++k) out[a.name(k)] = d.name(h[k]);
      if (!emit(out)) stop = true;
      return;
    }
    for (int j = 0; j < d.size() && !stop; ++j) {
      if (used[j]) continue;
      h[i] = j;
      used[j] = true;
      if (consistent()) self(self, i + 1);
      h[i] = -1;
      used[j] = false;
    }
  };
  rec(rec, 0);
}

}  // namespace

std::optional<ElementMap> find_embedding(const FiniteAlgebra& a, const FiniteAlgebra& d, const ElementMap& partial) {
  std::optional<ElementMap> found;
  search_embeddings(a, d, partial, [&](const ElementMap& m) {
    found = m;
    return false;
  });
  return found;
}

std::vector<ElementMap> all_embeddings(const FiniteAlgebra& a, const FiniteAlgebra& d) {
  std::vector<ElementMap> out;
  search_embeddings(a, d, {}, [&](const ElementMap& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

bool is_embedding(const ElementMap& h, const FiniteAlgebra& a, const FiniteAlgebra& d) {
  if (!(a.signature() == d.signature())) return false;
  std::vector<int> into(a.size(), -1);
  std::vector<bool> used(d.size(), false);
  for (int i = 0; i < a.size(); ++i) {
    auto it = h.find(a.name(i));
    if (it == h.end()) return false;
    auto j = d.index_of(it->second);
    if (!j || used[*j]) return false;
    used[*j] = true;
    into[i] = *j;
  }
  for (const auto& [c, v] : a.constants())
    if (d.constant(c) != into[v]) return false;
  const auto ops = a.signature().op_names();
  for (size_t o = 0; o < ops.size(); ++o) {
    const int arity = a.signature().arity(ops[o]);
    std::vector<int> args(arity), mapped(arity);
    for (std::int64_t t = 0; t < table_size(a.size(), arity); ++t) {
      tuple_at(t, a.size(), args);
      for (int k = 0; k < arity; ++k) mapped[k] = into[args[k]];
      if (d.apply(static_cast<int>(o), mapped) != into[a.table(static_cast<int>(o))[t]]) return false;
    }
  }
  return true;
}

bool isomorphic(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  return a.size() == b.size() && a.signature() == b.signature() && find_embedding(a, b).has_value();
}

}  // namespace linamalg
