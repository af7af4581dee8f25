#include "preludec/elaborator.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

namespace preludec {

ValueType ValueType::int_type() { return ValueType{}; }

ValueType ValueType::bool_type() {
  ValueType t;
  t.tag_ = Tag::Bool;
  return t;
}

ValueType ValueType::array_of(ValueType element, BigInt count) {
  ValueType t;
  t.tag_ = Tag::Array;
  t.element_ = std::make_shared<const ValueType>(std::move(element));
  t.count_ = std::move(count);
  return t;
}

ValueType ValueType::of(SimpleType t) {
  return t == SimpleType::Bool ? bool_type() : int_type();
}

const ValueType& ValueType::element() const {
  assert(tag_ == Tag::Array);
  return *element_;
}

const BigInt& ValueType::count() const {
  assert(tag_ == Tag::Array);
  return count_;
}

std::string ValueType::to_string() const {
  switch (tag_) {
    case Tag::Int: return "int";
    case Tag::Bool: return "bool";
    case Tag::Array: return "array (" + element_->to_string() + ", " + count_.str() + ")";
  }
  return "";
}

bool ValueType::operator==(const ValueType& other) const {
  if (tag_ != other.tag_) return false;
  if (tag_ != Tag::Array) return true;
  return count_ == other.count_ && *element_ == *other.element_;
}

std::string FlowType::to_string() const {
  return value_type.to_string() + " rate " + clock.to_string();
}

namespace {

const char* code_for(ClockErrorKind kind) {
  switch (kind) {
    case ClockErrorKind::DivisibilityViolation: return codes::Divisibility;
    case ClockErrorKind::NonPositiveFactor: return codes::NonPositiveFactor;
    case ClockErrorKind::NonIntegerShift: return codes::NonIntegerShift;
    case ClockErrorKind::NegativeShift: return codes::NegativeShift;
    case ClockErrorKind::NonPositivePeriod:
    case ClockErrorKind::NonIntegerStartDate: return codes::InvalidClock;
  }
  return codes::InvalidClock;
}

struct InferOut {
  std::vector<std::optional<FlowType>> types;
  bool arity_known = true;

  static InferOut one(FlowType t) {
    InferOut out;
    out.types.push_back(std::move(t));
    return out;
  }
  static InferOut poison() {
    InferOut out;
    out.types.push_back(std::nullopt);
    return out;
  }
  static InferOut unknown() {
    InferOut out;
    out.arity_known = false;
    return out;
  }
};

using Env = std::map<std::string, std::optional<FlowType>>;

// Expression type inference shared by whole-program checking and the public
// infer_expr entry point. Diagnostics can be muted during the kind fixpoint's
// warm-up rounds; only the final round reports.
class Inferrer {
 public:
  Inferrer(const CheckOptions& options, std::string file,
           const std::map<std::string, NodeSignature>& signatures,
           const std::map<std::string, std::set<std::string>>& strict_params,
           const std::set<std::string>& broken_nodes, const Env& env,
           std::vector<Diagnostic>& sink)
      : options_(options),
        file_(std::move(file)),
        signatures_(signatures),
        strict_params_(strict_params),
        broken_nodes_(broken_nodes),
        env_(env),
        sink_(sink) {}

  InferOut run(const Expr& e, bool report) {
    report_ = report;
    return infer(e);
  }

 private:
  void emit(Diagnostic d) {
    if (report_) sink_.push_back(std::move(d));
  }

  void emit_error(const char* code, std::string message, SourceLocation loc) {
    emit(Diagnostic::error(code, std::move(message), file_, loc));
  }

  void warn_negative_start(const Clock& c, SourceLocation loc) {
    if (c.start_date() >= 0) return;
    Diagnostic d = Diagnostic::warning(
        codes::NegativeStart, "start date " + c.start_date().str() + " is negative", file_, loc);
    if (options_.strict_start_dates) d.severity = Severity::Error;
    emit(std::move(d));
  }

  std::optional<FlowType> infer_single(const Expr& e) {
    InferOut out = infer(e);
    if (!out.arity_known) return std::nullopt;
    if (out.types.size() != 1) {
      emit_error(codes::Arity,
                 "expression produces " + std::to_string(out.types.size()) +
                     " flows where one is expected",
                 e.loc);
      return std::nullopt;
    }
    return std::move(out.types[0]);
  }

  // Single Strict operand; Boolean kind is a misuse for every operator that
  // calls this.
  std::optional<FlowType> strict_operand(const Expr& e, const std::string& op) {
    std::optional<FlowType> t = infer_single(e);
    if (!t) return std::nullopt;
    if (t->kind == FlowKind::Boolean) {
      emit_error(codes::BooleanFlowMisuse,
                 op + " requires a strictly periodic flow, but this operand is a boolean flow",
                 e.loc);
      return std::nullopt;
    }
    return t;
  }

  InferOut infer(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Var: {
        auto it = env_.find(e.name);
        if (it == env_.end()) {
          emit_error(codes::UndeclaredFlow, "flow '" + e.name + "' is not declared", e.loc);
          return InferOut::poison();
        }
        if (!it->second) return InferOut::poison();
        return InferOut::one(*it->second);
      }
      case ExprKind::ConstInt:
      case ExprKind::ConstBool:
        emit_error(codes::ValueType,
                   "constant literal is only legal as the first operand of fby or cons", e.loc);
        return InferOut::poison();
      case ExprKind::MulClock:
      case ExprKind::DivClock: {
        bool mul = e.kind == ExprKind::MulClock;
        std::optional<FlowType> t = strict_operand(*e.args[0], mul ? "'*^'" : "'/^'");
        if (!t) return InferOut::poison();
        Checked<Clock> c =
            mul ? oversample(t->clock, e.int_value) : undersample(t->clock, e.int_value);
        if (!c.ok()) {
          emit_error(code_for(c.error().kind), c.error().message, e.loc);
          return InferOut::poison();
        }
        return InferOut::one(FlowType{t->value_type, FlowKind::Strict, c.value()});
      }
      case ExprKind::DivQueue: {
        std::optional<FlowType> t = strict_operand(*e.args[0], "'/^^'");
        if (!t) return InferOut::poison();
        Checked<WindowedClock> c = queue_undersample(t->clock, e.int_value);
        if (!c.ok()) {
          emit_error(code_for(c.error().kind), c.error().message, e.loc);
          return InferOut::poison();
        }
        return InferOut::one(FlowType{ValueType::array_of(t->value_type, e.int_value),
                                      FlowKind::Strict, c.value().clock});
      }
      case ExprKind::ShiftClock: {
        std::optional<FlowType> t = strict_operand(*e.args[0], "'~>'");
        if (!t) return InferOut::poison();
        Checked<Clock> c = shift_phase(t->clock, e.rat_value, options_.shift_policy);
        if (!c.ok()) {
          emit_error(code_for(c.error().kind), c.error().message, e.loc);
          return InferOut::poison();
        }
        warn_negative_start(c.value(), e.loc);
        return InferOut::one(FlowType{t->value_type, FlowKind::Strict, c.value()});
      }
      case ExprKind::Fby:
      case ExprKind::Cons: {
        bool fby = e.kind == ExprKind::Fby;
        const char* op = fby ? "fby" : "cons";
        std::optional<ValueType> head = head_type(*e.args[0], op);
        std::optional<FlowType> body = strict_operand(*e.args[1], std::string("'") + op + "'");
        if (!body) return InferOut::poison();
        if (head && !(*head == body->value_type)) {
          emit_error(codes::ValueType,
                     std::string("constant of type ") + head->to_string() + " cannot start a " +
                         body->value_type.to_string() + " flow",
                     e.args[0]->loc);
        }
        if (fby) return InferOut::one(*body);
        Clock c = cons_clock(body->clock);
        warn_negative_start(c, e.loc);
        return InferOut::one(FlowType{body->value_type, FlowKind::Strict, c});
      }
      case ExprKind::Tail: {
        std::optional<FlowType> t = strict_operand(*e.args[0], "'tail'");
        if (!t) return InferOut::poison();
        return InferOut::one(FlowType{t->value_type, FlowKind::Strict, tail_clock(t->clock)});
      }
      case ExprKind::When: {
        std::optional<FlowType> data = strict_operand(*e.args[0], "'when'");
        std::optional<FlowType> cond = strict_operand(*e.args[1], "'when'");
        if (!data || !cond) return InferOut::poison();
        if (!cond->value_type.is_bool()) {
          emit_error(codes::ValueType,
                     "when condition must be a bool flow, got " + cond->value_type.to_string(),
                     e.args[1]->loc);
          return InferOut::poison();
        }
        if (!(data->clock == cond->clock)) {
          emit(Diagnostic::error(codes::ClockMismatch,
                                 "when operands must share one clock", file_, e.loc)
                   .with_clocks(data->clock.to_string(), cond->clock.to_string()));
          return InferOut::poison();
        }
        return InferOut::one(FlowType{data->value_type, FlowKind::Boolean, data->clock});
      }
      case ExprKind::Merge: {
        std::optional<FlowType> cond = strict_operand(*e.args[0], "'merge'");
        std::optional<FlowType> on_true = strict_operand(*e.args[1], "'merge'");
        std::optional<FlowType> on_false = strict_operand(*e.args[2], "'merge'");
        if (!cond || !on_true || !on_false) return InferOut::poison();
        if (!cond->value_type.is_bool()) {
          emit_error(codes::ValueType,
                     "merge condition must be a bool flow, got " + cond->value_type.to_string(),
                     e.args[0]->loc);
          return InferOut::poison();
        }
        if (!(on_true->value_type == on_false->value_type)) {
          emit_error(codes::ValueType,
                     "merge branches have different value types: " +
                         on_true->value_type.to_string() + " and " +
                         on_false->value_type.to_string(),
                     e.loc);
          return InferOut::poison();
        }
        for (const FlowType* side : {&*on_true, &*on_false}) {
          if (!(side->clock == cond->clock)) {
            emit(Diagnostic::error(codes::ClockMismatch,
                                   "merge operands must share one clock", file_, e.loc)
                     .with_clocks(cond->clock.to_string(), side->clock.to_string()));
            return InferOut::poison();
          }
        }
        return InferOut::one(FlowType{on_true->value_type, FlowKind::Strict, cond->clock});
      }
      case ExprKind::Call:
        return infer_call(e);
    }
    return InferOut::unknown();
  }

  std::optional<ValueType> head_type(const Expr& head, const char* op) {
    if (head.kind == ExprKind::ConstInt) return ValueType::int_type();
    if (head.kind == ExprKind::ConstBool) return ValueType::bool_type();
    emit_error(codes::ValueType,
               std::string("first operand of ") + op + " must be a constant literal", head.loc);
    return std::nullopt;
  }

  InferOut infer_call(const Expr& e) {
    auto sig_it = signatures_.find(e.name);
    if (sig_it == signatures_.end()) {
      if (!broken_nodes_.count(e.name)) {
        emit_error(codes::UndefinedNode, "node '" + e.name + "' is not declared", e.loc);
      }
      for (const ExprPtr& arg : e.args) infer_single(*arg);
      return InferOut::unknown();
    }
    const NodeSignature& sig = sig_it->second;
    if (e.args.size() != sig.inputs.size()) {
      emit_error(codes::Arity,
                 "node '" + e.name + "' expects " + std::to_string(sig.inputs.size()) +
                     " arguments, got " + std::to_string(e.args.size()),
                 e.loc);
    }
    const std::set<std::string>* strict = nullptr;
    if (auto it = strict_params_.find(e.name); it != strict_params_.end()) strict = &it->second;
    for (std::size_t j = 0; j < e.args.size(); ++j) {
      std::optional<FlowType> t = infer_single(*e.args[j]);
      if (!t || j >= sig.inputs.size()) continue;
      const SignatureParam& param = sig.inputs[j];
      if (!(t->value_type == param.type.value_type)) {
        emit_error(codes::ValueType,
                   "argument has value type " + t->value_type.to_string() + " but parameter '" +
                       param.name + "' of node '" + e.name + "' expects " +
                       param.type.value_type.to_string(),
                   e.args[j]->loc);
      }
      if (!(t->clock == param.type.clock)) {
        emit(Diagnostic::error(codes::ClockMismatch,
                               "argument clock does not match parameter '" + param.name +
                                   "' of node '" + e.name + "'",
                               file_, e.args[j]->loc)
                 .with_clocks(param.type.clock.to_string(), t->clock.to_string()));
      }
      if (t->kind == FlowKind::Boolean &&
          (sig.imported || (strict && strict->count(param.name)))) {
        emit_error(codes::BooleanFlowMisuse,
                   "boolean flow passed to parameter '" + param.name + "' of node '" + e.name +
                       "', which requires a strictly periodic flow",
                   e.args[j]->loc);
      }
    }
    InferOut out;
    for (const SignatureParam& o : sig.outputs) out.types.push_back(o.type);
    return out;
  }

  const CheckOptions& options_;
  std::string file_;
  const std::map<std::string, NodeSignature>& signatures_;
  const std::map<std::string, std::set<std::string>>& strict_params_;
  const std::set<std::string>& broken_nodes_;
  const Env& env_;
  std::vector<Diagnostic>& sink_;
  bool report_ = true;
};

class Checker {
 public:
  Checker(const Program& p, const CheckOptions& options) : program_(p), options_(options) {}

  CheckResult run() {
    check_env_decls();
    build_signatures();
    std::vector<const NodeDecl*> order = concrete_order();
    for (const NodeDecl* node : order) {
      strict_params_[node->name] = compute_strict_params(*node);
      check_node(*node);
    }
    sort_diagnostics(diags_);
    return CheckResult{std::move(diags_), std::move(signatures_), std::move(node_types_)};
  }

 private:
  void error(const char* code, std::string message, SourceLocation loc) {
    diags_.push_back(Diagnostic::error(code, std::move(message), program_.filename, loc));
  }

  void warn_negative_start(const Clock& c, SourceLocation loc) {
    if (c.start_date() >= 0) return;
    Diagnostic d = Diagnostic::warning(codes::NegativeStart,
                                       "start date " + c.start_date().str() + " is negative",
                                       program_.filename, loc);
    if (options_.strict_start_dates) d.severity = Severity::Error;
    diags_.push_back(std::move(d));
  }

  std::optional<Clock> validate_decl(const FlowDecl& d) {
    Checked<Clock> c = Clock::validate(d.rate.period, d.rate.phase);
    if (!c.ok()) {
      error(codes::InvalidClock,
            "invalid clock for flow '" + d.name + "': " + c.error().message, d.rate.loc);
      return std::nullopt;
    }
    warn_negative_start(c.value(), d.rate.loc);
    return c.value();
  }

  void check_env_decls() {
    std::set<std::string> seen;
    auto visit = [&](const std::vector<EnvDecl>& ds, const char* what) {
      for (const EnvDecl& d : ds) {
        if (!seen.insert(d.name).second) {
          error(codes::DuplicateName,
                std::string(what) + " '" + d.name + "' is already declared", d.loc);
        }
      }
    };
    visit(program_.sensors, "sensor");
    visit(program_.actuators, "actuator");
  }

  void build_signatures() {
    for (const NodeDecl& node : program_.nodes) {
      if (signatures_.count(node.name) || broken_nodes_.count(node.name)) {
        error(codes::DuplicateName, "node '" + node.name + "' is already declared", node.loc);
        duplicate_decls_.insert(&node);
        continue;
      }
      NodeSignature sig;
      sig.name = node.name;
      sig.imported = node.imported;
      bool complete = true;
      std::set<std::string> names;
      auto declare = [&](const FlowDecl& d, std::vector<SignatureParam>* into) {
        if (!names.insert(d.name).second) {
          error(codes::DuplicateName,
                "flow '" + d.name + "' is already declared in node '" + node.name + "'", d.loc);
          return;
        }
        std::optional<Clock> c = validate_decl(d);
        decl_clocks_[&d] = c;
        if (!c) {
          complete = false;
          return;
        }
        if (into) {
          into->push_back(
              SignatureParam{d.name, FlowType{ValueType::of(d.value_type), FlowKind::Strict, *c}});
        }
      };
      for (const FlowDecl& d : node.inputs) declare(d, &sig.inputs);
      for (const FlowDecl& d : node.outputs) declare(d, &sig.outputs);
      for (const FlowDecl& d : node.locals) declare(d, nullptr);
      if (complete) {
        signatures_.emplace(node.name, std::move(sig));
      } else {
        broken_nodes_.insert(node.name);
      }
    }
  }

  // Concrete nodes, callees before callers; recursion is reported and the
  // members are still checked with their current signatures.
  std::vector<const NodeDecl*> concrete_order() {
    std::vector<const NodeDecl*> nodes;
    std::map<std::string, std::size_t> index;
    for (const NodeDecl& n : program_.nodes) {
      if (n.imported || duplicate_decls_.count(&n)) continue;
      index[n.name] = nodes.size();
      nodes.push_back(&n);
    }
    std::vector<std::vector<std::size_t>> edges(nodes.size());
    std::vector<bool> self_loop(nodes.size(), false);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      std::set<std::size_t> callees;
      for (const Equation& eq : nodes[i]->equations) {
        collect_calls(*eq.rhs, [&](const Expr& call) {
          auto it = index.find(call.name);
          if (it != index.end()) callees.insert(it->second);
        });
      }
      for (std::size_t j : callees) {
        if (j == i) self_loop[i] = true;
        else edges[i].push_back(j);
      }
    }

    // Tarjan; SCCs pop with callees first, which is the checking order.
    std::vector<const NodeDecl*> order;
    std::vector<int> idx(nodes.size(), -1), low(nodes.size(), 0);
    std::vector<bool> on_stack(nodes.size(), false);
    std::vector<std::size_t> stack;
    int counter = 0;
    std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
      idx[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      for (std::size_t w : edges[v]) {
        if (idx[w] < 0) {
          strongconnect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
      }
      if (low[v] != idx[v]) return;
      std::vector<std::size_t> scc;
      for (;;) {
        std::size_t w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        scc.push_back(w);
        if (w == v) break;
      }
      std::sort(scc.begin(), scc.end());
      if (scc.size() > 1 || self_loop[scc[0]]) {
        std::string members;
        for (std::size_t w : scc) {
          if (!members.empty()) members += ", ";
          members += nodes[w]->name;
        }
        error(codes::RecursiveNode, "recursive node definitions are not supported: " + members,
              nodes[scc[0]]->loc);
      }
      for (std::size_t w : scc) order.push_back(nodes[w]);
    };
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      if (idx[v] < 0) strongconnect(v);
    }
    return order;
  }

  static void collect_calls(const Expr& e, const std::function<void(const Expr&)>& fn) {
    if (e.kind == ExprKind::Call) fn(e);
    for (const ExprPtr& a : e.args) collect_calls(*a, fn);
  }

  // Parameter names that must stay strictly periodic: names used as direct
  // operands of kind-sensitive operators, closed under alias equations and
  // calls into parameters with the same requirement.
  std::set<std::string> compute_strict_params(const NodeDecl& node) {
    std::set<std::string> strict;
    auto mark = [&](const Expr& e) {
      if (e.kind == ExprKind::Var) strict.insert(e.name);
    };
    std::function<void(const Expr&)> visit = [&](const Expr& e) {
      switch (e.kind) {
        case ExprKind::MulClock:
        case ExprKind::DivClock:
        case ExprKind::DivQueue:
        case ExprKind::ShiftClock:
        case ExprKind::Tail:
          mark(*e.args[0]);
          break;
        case ExprKind::Fby:
        case ExprKind::Cons:
          mark(*e.args[1]);
          break;
        case ExprKind::When:
        case ExprKind::Merge:
          for (const ExprPtr& a : e.args) mark(*a);
          break;
        case ExprKind::Call: {
          auto sig_it = signatures_.find(e.name);
          if (sig_it != signatures_.end()) {
            const NodeSignature& sig = sig_it->second;
            const std::set<std::string>* callee_strict = nullptr;
            if (auto it = strict_params_.find(e.name); it != strict_params_.end()) {
              callee_strict = &it->second;
            }
            for (std::size_t j = 0; j < e.args.size() && j < sig.inputs.size(); ++j) {
              if (sig.imported ||
                  (callee_strict && callee_strict->count(sig.inputs[j].name))) {
                mark(*e.args[j]);
              }
            }
          }
          break;
        }
        default:
          break;
      }
      for (const ExprPtr& a : e.args) visit(*a);
    };
    for (const Equation& eq : node.equations) visit(*eq.rhs);

    // Alias closure: x = y makes y as strict as x.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Equation& eq : node.equations) {
        if (eq.lhs.size() == 1 && eq.rhs->kind == ExprKind::Var && strict.count(eq.lhs[0]) &&
            strict.insert(eq.rhs->name).second) {
          changed = true;
        }
      }
    }

    std::set<std::string> params;
    for (const FlowDecl& d : node.inputs) {
      if (strict.count(d.name)) params.insert(d.name);
    }
    return params;
  }

  void check_node(const NodeDecl& node) {
    Env env;
    std::map<std::string, const FlowDecl*> decls;
    for (const std::vector<FlowDecl>* group : {&node.inputs, &node.outputs, &node.locals}) {
      for (const FlowDecl& d : *group) {
        if (decls.count(d.name)) continue;  // duplicate already reported
        decls[d.name] = &d;
        std::optional<Clock> c = decl_clocks_.at(&d);
        env[d.name] = c ? std::optional<FlowType>(FlowType{ValueType::of(d.value_type),
                                                           FlowKind::Strict, *c})
                        : std::nullopt;
      }
    }
    std::set<std::string> inputs;
    for (const FlowDecl& d : node.inputs) inputs.insert(d.name);

    Inferrer inferrer(options_, program_.filename, signatures_, strict_params_, broken_nodes_,
                      env, diags_);

    // Kind fixpoint: a local's Boolean kind comes from its rhs, and rhs
    // inference reads other flows' kinds, so iterate to a fixed point before
    // the reporting pass. Kinds only move Strict -> Boolean, so env.size()
    // rounds suffice.
    for (std::size_t round = 0; round <= env.size(); ++round) {
      bool changed = false;
      for (const Equation& eq : node.equations) {
        InferOut out = inferrer.run(*eq.rhs, /*report=*/false);
        if (!out.arity_known || out.types.size() != eq.lhs.size()) continue;
        for (std::size_t i = 0; i < eq.lhs.size(); ++i) {
          if (!out.types[i] || out.types[i]->kind != FlowKind::Boolean) continue;
          auto it = env.find(eq.lhs[i]);
          if (it == env.end() || !it->second || it->second->kind == FlowKind::Boolean) continue;
          it->second->kind = FlowKind::Boolean;
          changed = true;
        }
      }
      if (!changed) break;
    }

    // Reporting pass: infer each rhs once with diagnostics on, then eliminate
    // the lhs futures against their declarations.
    std::map<std::string, SourceLocation> defined_at;
    for (const Equation& eq : node.equations) {
      InferOut out = inferrer.run(*eq.rhs, /*report=*/true);
      bool sizes_match = out.arity_known && out.types.size() == eq.lhs.size();
      if (out.arity_known && !sizes_match) {
        error(codes::Arity,
              "equation binds " + std::to_string(eq.lhs.size()) +
                  " flows but its right-hand side produces " + std::to_string(out.types.size()),
              eq.loc);
      }
      for (std::size_t i = 0; i < eq.lhs.size(); ++i) {
        const std::string& name = eq.lhs[i];
        SourceLocation loc = eq.lhs_locs[i];
        auto decl_it = decls.find(name);
        if (decl_it == decls.end()) {
          error(codes::UndeclaredFlow, "flow '" + name + "' is not declared", loc);
          continue;
        }
        if (inputs.count(name)) {
          error(codes::IllegalLhs, "input flow '" + name + "' cannot be defined", loc);
          continue;
        }
        if (!defined_at.emplace(name, loc).second) {
          error(codes::MultipleDefinition, "flow '" + name + "' is defined more than once", loc);
          continue;
        }
        if (!sizes_match) continue;
        const std::optional<FlowType>& declared = env.at(name);
        const std::optional<FlowType>& actual = out.types[i];
        if (!declared || !actual) continue;
        if (!(actual->value_type == declared->value_type)) {
          error(codes::ValueType,
                "flow '" + name + "' is declared " + declared->value_type.to_string() +
                    " but its definition produces " + actual->value_type.to_string(),
                loc);
        }
        if (!(actual->clock == declared->clock)) {
          diags_.push_back(Diagnostic::error(codes::ClockMismatch,
                                             "flow '" + name +
                                                 "' is defined with the wrong clock",
                                             program_.filename, loc)
                               .with_clocks(declared->clock.to_string(),
                                            actual->clock.to_string()));
        }
      }
    }

    for (const std::vector<FlowDecl>* group : {&node.outputs, &node.locals}) {
      for (const FlowDecl& d : *group) {
        if (decls.at(d.name) != &d) continue;
        if (!decl_clocks_.at(&d)) continue;
        if (!defined_at.count(d.name)) {
          error(codes::UndefinedFlow, "flow '" + d.name + "' is declared but never defined",
                d.loc);
        }
      }
    }

    causality_check(node, decls);

    NodeTypes types;
    for (const auto& [name, t] : env) {
      if (t) types.flows.emplace(name, *t);
    }
    node_types_.emplace(node.name, std::move(types));
    if (auto it = signatures_.find(node.name); it != signatures_.end()) {
      for (SignatureParam& out : it->second.outputs) {
        if (auto t = env.find(out.name); t != env.end() && t->second) {
          out.type.kind = t->second->kind;
        }
      }
    }
  }

  struct ReadEdge {
    std::size_t from;  // flow being read
    bool delayed;
  };

  void causality_check(const NodeDecl& node,
                       const std::map<std::string, const FlowDecl*>& decls) {
    // Flows that can participate in a cycle: declared non-inputs, in
    // declaration order.
    std::vector<std::string> flows;
    std::map<std::string, std::size_t> index;
    for (const std::vector<FlowDecl>* group : {&node.outputs, &node.locals}) {
      for (const FlowDecl& d : *group) {
        if (decls.count(d.name) && !index.count(d.name)) {
          index[d.name] = flows.size();
          flows.push_back(d.name);
        }
      }
    }

    // adj[v] = edges into the definitions bound at v's defining equation.
    // A multi-occurrence read counts as delayed only if every occurrence is
    // delayed; otherwise the undelayed read still demands the value at its
    // own date.
    std::vector<std::vector<ReadEdge>> adj(flows.size());
    std::vector<std::optional<SourceLocation>> def_loc(flows.size());
    std::vector<std::size_t> def_order(flows.size(), SIZE_MAX);
    for (std::size_t eq_index = 0; eq_index < node.equations.size(); ++eq_index) {
      const Equation& eq = node.equations[eq_index];
      std::map<std::size_t, bool> reads;  // flow index -> all reads delayed
      std::function<void(const Expr&, bool)> walk = [&](const Expr& e, bool delayed) {
        if (e.kind == ExprKind::Var) {
          auto it = index.find(e.name);
          if (it != index.end()) {
            auto [slot, inserted] = reads.emplace(it->second, delayed);
            if (!inserted) slot->second = slot->second && delayed;
          }
          return;
        }
        if (e.kind == ExprKind::Fby || e.kind == ExprKind::Cons) {
          walk(*e.args[0], delayed);
          walk(*e.args[1], true);
          return;
        }
        for (const ExprPtr& a : e.args) walk(*a, delayed);
      };
      walk(*eq.rhs, false);
      for (const std::string& name : eq.lhs) {
        auto it = index.find(name);
        if (it == index.end()) continue;
        if (!def_loc[it->second]) {
          def_loc[it->second] = eq.loc;
          def_order[it->second] = eq_index;
        }
        for (const auto& [from, delayed] : reads) {
          adj[it->second].push_back(ReadEdge{from, delayed});
        }
      }
    }

    // Tarjan over the read graph (edge v -> from means "v reads from").
    std::vector<int> idx(flows.size(), -1), low(flows.size(), 0);
    std::vector<bool> on_stack(flows.size(), false);
    std::vector<std::size_t> stack;
    int counter = 0;
    std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
      idx[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      for (const ReadEdge& e : adj[v]) {
        if (idx[e.from] < 0) {
          strongconnect(e.from);
          low[v] = std::min(low[v], low[e.from]);
        } else if (on_stack[e.from]) {
          low[v] = std::min(low[v], idx[e.from]);
        }
      }
      if (low[v] != idx[v]) return;
      std::vector<std::size_t> scc;
      for (;;) {
        std::size_t w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        scc.push_back(w);
        if (w == v) break;
      }
      std::set<std::size_t> members(scc.begin(), scc.end());
      bool cyclic = scc.size() > 1;
      bool has_delay = false;
      for (std::size_t w : scc) {
        for (const ReadEdge& e : adj[w]) {
          if (!members.count(e.from)) continue;
          if (w == e.from) cyclic = true;
          if (e.delayed) has_delay = true;
        }
      }
      if (!cyclic || has_delay) return;
      std::sort(scc.begin(), scc.end());
      std::string names;
      for (std::size_t w : scc) {
        if (!names.empty()) names += ", ";
        names += flows[w];
      }
      std::size_t first = *std::min_element(scc.begin(), scc.end(), [&](std::size_t a,
                                                                        std::size_t b) {
        return def_order[a] < def_order[b];
      });
      SourceLocation loc = def_loc[first] ? *def_loc[first] : node.loc;
      error(codes::CausalityCycle,
            "causality cycle with no fby or cons delay through: " + names, loc);
    };
    for (std::size_t v = 0; v < flows.size(); ++v) {
      if (idx[v] < 0) strongconnect(v);
    }
  }

  const Program& program_;
  CheckOptions options_;
  std::vector<Diagnostic> diags_;
  std::map<std::string, NodeSignature> signatures_;
  std::map<std::string, NodeTypes> node_types_;
  std::map<std::string, std::set<std::string>> strict_params_;
  std::set<std::string> broken_nodes_;
  std::set<const NodeDecl*> duplicate_decls_;
  std::map<const FlowDecl*, std::optional<Clock>> decl_clocks_;
};

}  // namespace

CheckResult check_program(const Program& p, const CheckOptions& options) {
  return Checker(p, options).run();
}

ExprCheck infer_expr(const TypeEnv& env, const Expr& e, const CheckOptions& options) {
  std::map<std::string, NodeSignature> signatures;
  std::map<std::string, std::set<std::string>> strict_params;
  std::set<std::string> broken;
  Env internal_env;
  for (const auto& [name, t] : env) internal_env.emplace(name, t);
  ExprCheck result;
  Inferrer inferrer(options, "<expr>", signatures, strict_params, broken, internal_env,
                    result.diagnostics);
  InferOut out = inferrer.run(e, /*report=*/true);
  if (out.arity_known && out.types.size() == 1) result.type = std::move(out.types[0]);
  sort_diagnostics(result.diagnostics);
  return result;
}

}  // namespace preludec
