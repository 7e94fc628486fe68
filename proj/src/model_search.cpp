#include "linamalg/model_search.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "linamalg/error.hpp"

namespace linamalg {

PartialAlgebra PartialAlgebra::empty(const Signature& sig, std::vector<std::string> carrier) {
  PartialAlgebra p{sig, std::move(carrier), {}, {}};
  const int n = static_cast<int>(p.carrier.size());
  for (const auto& op : sig.op_names()) p.tables.emplace_back(table_size(n, sig.arity(op)), -1);
  for (const auto& c : sig.constants()) p.constants[c] = -1;
  return p;
}

void PartialAlgebra::fix_from(const FiniteAlgebra& part) {
  if (!(part.signature() == signature)) fail(ErrorKind::signature_mismatch, "fix_from across signatures");
  const int n = static_cast<int>(carrier.size());
  std::vector<int> into(part.size());
  for (int i = 0; i < part.size(); ++i) {
    auto it = std::find(carrier.begin(), carrier.end(), part.name(i));
    if (it == carrier.end()) fail(ErrorKind::precondition, "element " + part.name(i) + " missing from carrier");
    into[i] = static_cast<int>(it - carrier.begin());
  }
  for (const auto& [c, v] : part.constants()) {
    if (constants[c] >= 0 && constants[c] != into[v])
      fail(ErrorKind::constant_clash, "conflicting interpretations of '" + c);
    constants[c] = into[v];
  }
  const auto ops = signature.op_names();
  for (size_t o = 0; o < ops.size(); ++o) {
    const int arity = signature.arity(ops[o]);
    std::vector<int> args(arity), mapped(arity);
    for (std::int64_t t = 0; t < table_size(part.size(), arity); ++t) {
      tuple_at(t, part.size(), args);
      for (int k = 0; k < arity; ++k) mapped[k] = into[args[k]];
      int& slot = tables[o][tuple_index(mapped, n)];
      const int v = into[part.table(static_cast<int>(o))[t]];
      if (slot >= 0 && slot != v) fail(ErrorKind::precondition, "conflicting table entries for " + ops[o]);
      slot = v;
    }
  }
}

std::int64_t PartialAlgebra::free_entries() const {
  std::int64_t k = 0;
  for (const auto& t : tables) k += std::count(t.begin(), t.end(), -1);
  for (const auto& [_, v] : constants) k += v < 0;
  return k;
}

std::vector<std::string> default_carrier(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("e" + std::to_string(i));
  return out;
}

namespace {

class Search {
 public:
  Search(const std::vector<Equation>& equations, const PartialAlgebra& start, const SearchOptions& options)
      : start_(start), options_(options), n_(static_cast<int>(start.carrier.size())) {
    if (n_ == 0) fail(ErrorKind::precondition, "model search over an empty carrier");
    const auto& sig = start.signature;
    consts_ = sig.constant_names();
    ops_ = sig.op_names();
    int base = static_cast<int>(consts_.size());
    for (const auto& c : consts_) vals_.push_back(start.constants.at(c));
    for (size_t o = 0; o < ops_.size(); ++o) {
      op_base_.push_back(base);
      arity_.push_back(sig.arity(ops_[o]));
      vals_.insert(vals_.end(), start.tables[o].begin(), start.tables[o].end());
      base += static_cast<int>(start.tables[o].size());
    }
    stamp_.assign(vals_.size(), -1);
    for (size_t e = 0; e < vals_.size(); ++e)
      if (vals_[e] < 0) order_.push_back(static_cast<int>(e));
    watch_.resize(vals_.size());
    for (const auto& eq : equations) compile(eq);
    if (options_.shuffle_seed) rng_.seed(*options_.shuffle_seed);
  }

  std::vector<FiniteAlgebra> run() {
    for (int i = 0; i < static_cast<int>(instances_.size()); ++i)
      if (!place(i) || !drain()) return {};
    descend(0);
    return std::move(found_);
  }

 private:
  struct Node {
    int kind;  // 0 variable, 1 constant, 2 application
    int a;     // variable index, constant entry or operation index
    std::vector<int> kids;
  };
  struct Instance {
    int lhs;
    int rhs;
    int assign;  // offset into assigns_
  };
  struct Eval {
    int value = -1;
    int blocker = -1;
    bool top = false;    // the blocker is this node's own entry, its arguments known
    int last = -1;       // latest trail stamp among the entries read
  };

  int compile_term(const Term& t, const std::map<std::string, int>& var_pos) {
    Node node{};
    if (t.is_variable()) {
      node = {0, var_pos.at(t.name()), {}};
    } else if (t.is_constant()) {
      auto it = std::find(consts_.begin(), consts_.end(), t.name());
      if (it == consts_.end()) fail(ErrorKind::signature_mismatch, "unknown constant '" + t.name());
      node = {1, static_cast<int>(it - consts_.begin()), {}};
    } else {
      auto it = std::find(ops_.begin(), ops_.end(), t.name());
      if (it == ops_.end()) fail(ErrorKind::signature_mismatch, "unknown operation " + t.name());
      node = {2, static_cast<int>(it - ops_.begin()), {}};
      for (const auto& a : t.args()) node.kids.push_back(compile_term(a, var_pos));
    }
    nodes_.push_back(std::move(node));
    return static_cast<int>(nodes_.size()) - 1;
  }

  void compile(const Equation& eq) {
    check_term(start_.signature, eq.lhs);
    check_term(start_.signature, eq.rhs);
    const auto vars_set = variables_of(eq);
    std::map<std::string, int> var_pos;
    for (const auto& v : vars_set) var_pos.emplace(v, static_cast<int>(var_pos.size()));
    const int lhs = compile_term(eq.lhs, var_pos);
    const int rhs = compile_term(eq.rhs, var_pos);
    const int k = static_cast<int>(var_pos.size());
    std::vector<int> a(k, 0);
    while (true) {
      instances_.push_back({lhs, rhs, static_cast<int>(assigns_.size())});
      assigns_.insert(assigns_.end(), a.begin(), a.end());
      int i = 0;
      while (i < k && ++a[i] == n_) a[i++] = 0;
      if (i == k) break;
    }
  }

  Eval eval(int node_id, const int* asg) const {
    const Node& node = nodes_[node_id];
    if (node.kind == 0) return {asg[node.a], -1, false, -1};
    Eval out;
    int entry = 0;
    if (node.kind == 1) {
      entry = node.a;
    } else {
      std::int64_t idx = 0;
      for (int kid : node.kids) {
        Eval e = eval(kid, asg);
        if (e.value < 0) return {-1, e.blocker, false, -1};
        out.last = std::max(out.last, e.last);
        idx = idx * n_ + e.value;
      }
      entry = op_base_[node.a] + static_cast<int>(idx);
    }
    if (vals_[entry] < 0) return {-1, entry, true, -1};
    out.last = std::max(out.last, stamp_[entry]);
    out.value = vals_[entry];
    return out;
  }

  void assign(int entry, int v) {
    vals_[entry] = v;
    stamp_[entry] = static_cast<int>(trail_.size());
    trail_.push_back(entry);
    queue_.push_back(entry);
  }

  void undo(size_t mark) {
    while (trail_.size() > mark) {
      vals_[trail_.back()] = -1;
      stamp_[trail_.back()] = -1;
      trail_.pop_back();
    }
    queue_.clear();
  }

  /// Re-evaluates an instance. A side that is one unknown entry away from
  /// the other side's value is forced; otherwise the instance is filed under
  /// an entry that must change before its status can. Returns false on a
  /// violated instance.
  bool place(int id) {
    const Instance& inst = instances_[id];
    const int* asg = assigns_.data() + inst.assign;
    Eval l = eval(inst.lhs, asg);
    Eval r = eval(inst.rhs, asg);
    if (l.value < 0 && r.value >= 0 && l.top) {
      assign(l.blocker, r.value);
      l = {r.value, -1, false, stamp_[l.blocker]};
    } else if (r.value < 0 && l.value >= 0 && r.top) {
      assign(r.blocker, l.value);
      r = {l.value, -1, false, stamp_[r.blocker]};
    }
    if (l.value < 0 || r.value < 0) {
      watch_[l.value < 0 ? l.blocker : r.blocker].push_back(id);
      return true;
    }
    if (l.value != r.value) return false;
    // Satisfied until the most recently assigned entry it reads is undone.
    const int last = std::max(l.last, r.last);
    if (last >= 0) watch_[trail_[last]].push_back(id);
    return true;
  }

  /// Re-places the watchers of every entry assigned since the last drain.
  bool drain() {
    for (size_t q = 0; q < queue_.size(); ++q) {
      const int entry = queue_[q];
      std::vector<int> pending;
      pending.swap(watch_[entry]);
      for (size_t i = 0; i < pending.size(); ++i) {
        if (!place(pending[i])) {
          watch_[entry].insert(watch_[entry].end(), pending.begin() + static_cast<std::ptrdiff_t>(i), pending.end());
          queue_.clear();
          return false;
        }
      }
    }
    queue_.clear();
    return true;
  }

  bool done() const { return options_.limit != 0 && found_.size() >= options_.limit; }

  void descend(size_t from) {
    while (from < order_.size() && vals_[order_[from]] >= 0) ++from;
    if (from == order_.size()) {
      emit();
      return;
    }
    const int entry = order_[from];
    std::vector<int> candidates(n_);
    std::iota(candidates.begin(), candidates.end(), 0);
    if (options_.shuffle_seed) std::shuffle(candidates.begin(), candidates.end(), rng_);
    for (int v : candidates) {
      if (done()) return;
      if (++nodes_visited_ > options_.node_budget)
        fail(ErrorKind::budget_exceeded, "model search exceeded its node budget");
      const size_t mark = trail_.size();
      assign(entry, v);
      if (drain()) descend(from + 1);
      undo(mark);
    }
  }

  void emit() {
    std::vector<std::vector<int>> tables;
    for (size_t o = 0; o < ops_.size(); ++o) {
      auto begin = vals_.begin() + op_base_[o];
      tables.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(table_size(n_, arity_[o])));
    }
    std::map<std::string, int> consts;
    for (size_t c = 0; c < consts_.size(); ++c) consts[consts_[c]] = vals_[c];
    found_.emplace_back(start_.signature, start_.carrier, std::move(tables), std::move(consts));
  }

  const PartialAlgebra& start_;
  SearchOptions options_;
  int n_;
  std::vector<std::string> consts_;
  std::vector<std::string> ops_;
  std::vector<int> op_base_;
  std::vector<int> arity_;
  std::vector<int> vals_;
  std::vector<int> stamp_;  // trail index of each assigned entry, -1 otherwise
  std::vector<int> order_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  std::vector<std::vector<int>> watch_;
  std::vector<Node> nodes_;
  std::vector<Instance> instances_;
  std::vector<int> assigns_;
  std::vector<FiniteAlgebra> found_;
  std::mt19937_64 rng_;
  std::int64_t nodes_visited_ = 0;
};

}  // namespace

std::vector<FiniteAlgebra> complete_models(const std::vector<Equation>& equations, const PartialAlgebra& start,
                                           const SearchOptions& options) {
  return Search(equations, start, options).run();
}

std::vector<FiniteAlgebra> enumerate_models(const Theory& theory, int n, const SearchOptions& options) {
  return complete_models(theory.axioms, PartialAlgebra::empty(theory.signature, default_carrier(n)), options);
}

std::optional<FiniteAlgebra> find_model(const Theory& theory, const PartialAlgebra& start,
                                        const SearchOptions& options) {
  SearchOptions first = options;
  first.limit = 1;
  auto models = complete_models(theory.axioms, start, first);
  if (models.empty()) return std::nullopt;
  return std::move(models.front());
}

}  // namespace linamalg
