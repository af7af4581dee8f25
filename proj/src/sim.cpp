#include "preludec/sim.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace preludec {

std::string Value::to_string() const {
  if (is_int()) return as_int().str();
  if (is_bool()) return as_bool() ? "true" : "false";
  std::string out = "[";
  const std::vector<Value>& elems = elements();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ',';
    out += elems[i].to_string();
  }
  out += ']';
  return out;
}

TaggedStream::TaggedStream(Clock source_clock, FlowKind kind, std::vector<Entry> entries)
    : clock_(std::move(source_clock)), kind_(kind), entries_(std::move(entries)) {
  if (kind_ == FlowKind::Strict) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].date != clock_.date_at(BigInt(i))) {
        throw SimError("strict stream violates the date law at index " + std::to_string(i) +
                       ": date " + entries_[i].date.str() + ", clock " + clock_.to_string());
      }
    }
    return;
  }
  const BigInt start = clock_.start_date();
  const BigInt& n = clock_.period();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    BigInt diff = entries_[i].date - start;
    if (diff < 0 || diff % n != 0) {
      throw SimError("boolean stream date " + entries_[i].date.str() +
                     " is not on clock " + clock_.to_string());
    }
    if (i > 0 && entries_[i - 1].date >= entries_[i].date) {
      throw SimError("boolean stream dates are not strictly increasing");
    }
  }
}

bool TaggedStream::operator==(const TaggedStream& other) const {
  return clock_ == other.clock_ && kind_ == other.kind_ && entries_ == other.entries_;
}

namespace {

void require_strict(const TaggedStream& s, const char* op) {
  if (s.kind() != FlowKind::Strict) {
    throw SimError(std::string(op) + " requires a strictly periodic stream");
  }
}

Clock value_of(Checked<Clock> c, const char* op) {
  if (!c.ok()) throw SimError(std::string(op) + ": " + c.error().message);
  return c.value();
}

}  // namespace

TaggedStream sim_source(const Clock& c, const Generator& gen, const BigInt& count) {
  if (count < 0) throw SimError("sim_source count must be non-negative");
  std::vector<Entry> entries;
  for (BigInt i = 0; i < count; ++i) {
    entries.push_back(Entry{gen(i), c.date_at(i)});
  }
  return TaggedStream::strict(c, std::move(entries));
}

TaggedStream sim_mul(const TaggedStream& s, const BigInt& k) {
  require_strict(s, "sim_mul");
  Clock out = value_of(oversample(s.clock(), k), "sim_mul");
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (BigInt r = 0; r < k; ++r) {
      BigInt j = BigInt(i) * k + r;
      entries.push_back(Entry{s.entries()[i].value, out.date_at(j)});
    }
  }
  return TaggedStream::strict(out, std::move(entries));
}

TaggedStream sim_div(const TaggedStream& s, const BigInt& k) {
  require_strict(s, "sim_div");
  Clock out = value_of(undersample(s.clock(), k), "sim_div");
  std::vector<Entry> entries;
  const BigInt len(s.size());
  for (BigInt j = 0; j * k < len; ++j) {
    std::size_t i = static_cast<std::size_t>(j * k);
    entries.push_back(Entry{s.entries()[i].value, out.date_at(j)});
  }
  return TaggedStream::strict(out, std::move(entries));
}

TaggedStream sim_shift(const TaggedStream& s, const Rational& q) {
  require_strict(s, "sim_shift");
  Clock out = value_of(shift_phase(s.clock(), q), "sim_shift");
  BigInt delta = (Rational(s.clock().period()) * q).to_integer();
  std::vector<Entry> entries;
  for (const Entry& e : s.entries()) {
    entries.push_back(Entry{e.value, e.date + delta});
  }
  return TaggedStream::strict(out, std::move(entries));
}

TaggedStream sim_cons(const TaggedStream& s, const Value& x) {
  require_strict(s, "sim_cons");
  Clock out = cons_clock(s.clock());
  std::vector<Entry> entries;
  entries.push_back(Entry{x, out.date_at(0)});
  entries.insert(entries.end(), s.entries().begin(), s.entries().end());
  return TaggedStream::strict(out, std::move(entries));
}

TaggedStream sim_tail(const TaggedStream& s) {
  require_strict(s, "sim_tail");
  Clock out = tail_clock(s.clock());
  std::vector<Entry> entries;
  if (!s.empty()) {
    entries.assign(s.entries().begin() + 1, s.entries().end());
  }
  return TaggedStream::strict(out, std::move(entries));
}

TaggedStream sim_fby(const Value& x, const TaggedStream& s) {
  require_strict(s, "sim_fby");
  const Clock& c = s.clock();
  std::vector<Entry> entries;
  entries.push_back(Entry{x, c.date_at(0)});
  for (std::size_t i = 0; i < s.size(); ++i) {
    entries.push_back(Entry{s.entries()[i].value, c.date_at(BigInt(i) + 1)});
  }
  return TaggedStream::strict(c, std::move(entries));
}

TaggedStream sim_when(const TaggedStream& data, const TaggedStream& cond) {
  require_strict(data, "sim_when");
  require_strict(cond, "sim_when");
  if (!(data.clock() == cond.clock())) {
    throw SimError("sim_when operands have different clocks: " + data.clock().to_string() +
                   " and " + cond.clock().to_string());
  }
  std::vector<Entry> entries;
  std::size_t len = std::min(data.size(), cond.size());
  for (std::size_t i = 0; i < len; ++i) {
    const Value& c = cond.entries()[i].value;
    if (!c.is_bool()) throw SimError("sim_when condition values must be bool");
    if (c.as_bool()) entries.push_back(data.entries()[i]);
  }
  return TaggedStream(data.clock(), FlowKind::Boolean, std::move(entries));
}

TaggedStream sim_merge(const TaggedStream& cond, const TaggedStream& on_true,
                       const TaggedStream& on_false) {
  require_strict(cond, "sim_merge");
  require_strict(on_true, "sim_merge");
  require_strict(on_false, "sim_merge");
  if (!(cond.clock() == on_true.clock()) || !(cond.clock() == on_false.clock())) {
    throw SimError("sim_merge operands have different clocks");
  }
  std::size_t len = std::min({cond.size(), on_true.size(), on_false.size()});
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < len; ++i) {
    const Value& c = cond.entries()[i].value;
    if (!c.is_bool()) throw SimError("sim_merge condition values must be bool");
    entries.push_back(c.as_bool() ? on_true.entries()[i] : on_false.entries()[i]);
  }
  return TaggedStream::strict(cond.clock(), std::move(entries));
}

TaggedStream sim_div_queue(const TaggedStream& s, const BigInt& k) {
  require_strict(s, "sim_div_queue");
  Checked<WindowedClock> out = queue_undersample(s.clock(), k);
  if (!out.ok()) throw SimError("sim_div_queue: " + out.error().message);
  std::vector<Entry> entries;
  const BigInt len(s.size());
  for (BigInt j = 0; j * k < len; ++j) {
    std::vector<Value> window;
    for (BigInt idx = j * k - k + 1; idx <= j * k; ++idx) {
      std::size_t i = idx < 0 ? 0 : static_cast<std::size_t>(idx);
      window.push_back(s.entries()[i].value);
    }
    entries.push_back(Entry{Value(std::move(window)), out.value().clock.date_at(j)});
  }
  return TaggedStream::strict(out.value().clock, std::move(entries));
}

TaggedStream clip_stream(const TaggedStream& s, const BigInt& t_end) {
  std::vector<Entry> entries;
  for (const Entry& e : s.entries()) {
    if (e.date >= t_end) break;
    entries.push_back(e);
  }
  return TaggedStream(s.clock(), s.kind(), std::move(entries));
}

std::map<std::string, TaggedStream> SimResult::outputs() const {
  std::map<std::string, TaggedStream> out;
  for (const std::string& name : output_names) {
    auto it = flows.find(name);
    if (it != flows.end()) out.emplace(name, it->second);
  }
  return out;
}

std::string dump_streams(const std::map<std::string, TaggedStream>& streams) {
  std::ostringstream out;
  for (const auto& [name, stream] : streams) {
    for (const Entry& e : stream.entries()) {
      out << name << ' ' << e.date.str() << ' ' << e.value.to_string() << '\n';
    }
  }
  return out.str();
}

namespace {

// Entries below t_end on a strict clock.
BigInt target_count(const Clock& c, const BigInt& t_end) {
  BigInt start = c.start_date();
  if (start >= t_end) return 0;
  return (t_end - 1 - start) / c.period() + 1;
}

Value literal_value(const Expr& e) {
  if (e.kind == ExprKind::ConstInt) return Value(e.int_value);
  if (e.kind == ExprKind::ConstBool) return Value(e.bool_value);
  throw SimError("fby/cons head is not a constant literal");
}

Value default_value(const ValueType& t, const BigInt& index) {
  if (t.is_bool()) return Value(index % 2 == 0);
  return Value(index);
}

// Input values re-stamped onto an output clock, index for index.
TaggedStream restamp(const TaggedStream& in, const Clock& out_clock) {
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < in.size(); ++i) {
    entries.push_back(Entry{in.entries()[i].value, out_clock.date_at(BigInt(i))});
  }
  return TaggedStream::strict(out_clock, std::move(entries));
}

class NodeSim {
 public:
  NodeSim(const Program& p, const CheckResult& checked, const SimConfig& cfg, BigInt t_end)
      : program_(p), checked_(checked), cfg_(cfg), t_end_(std::move(t_end)) {}

  SimResult run(const NodeDecl& node, std::map<std::string, TaggedStream> inputs) {
    const NodeTypes& types = checked_.node_types.at(node.name);
    std::map<std::string, TaggedStream> streams = std::move(inputs);
    std::map<std::string, BigInt> targets;
    for (const auto& [name, t] : types.flows) {
      if (t.kind == FlowKind::Strict) targets.emplace(name, target_count(t.clock, t_end_));
      if (!streams.count(name)) {
        streams.emplace(name, TaggedStream(t.clock, t.kind, {}));
      }
    }

    bool grew = true;
    int passes = 0;
    while (grew) {
      if (++passes > kMaxPasses) throw SimError("fixpoint iteration did not settle");
      grew = false;
      for (const Equation& eq : node.equations) {
        std::vector<TaggedStream> rhs = eval(*eq.rhs, streams);
        if (rhs.size() != eq.lhs.size()) {
          throw SimError("equation arity mismatch during simulation");
        }
        for (std::size_t i = 0; i < eq.lhs.size(); ++i) {
          TaggedStream clipped = clip_stream(rhs[i], t_end_);
          auto slot = streams.find(eq.lhs[i]);
          if (slot == streams.end()) throw SimError("undeclared flow during simulation");
          if (clipped.size() > slot->second.size()) {
            slot->second = std::move(clipped);
            grew = true;
          }
        }
      }
    }

    SimResult result;
    result.t_end = t_end_;
    for (const FlowDecl& d : node.outputs) result.output_names.push_back(d.name);
    for (const auto& [name, target] : targets) {
      if (streams.at(name).size() < target) {
        result.converged = false;
        result.warnings.push_back("flow '" + name + "' reached " +
                                  std::to_string(streams.at(name).size()) + " of " +
                                  target.str() + " entries before date " + t_end_.str());
      }
    }
    for (const auto& [name, stream] : streams) {
      if (!stream.empty() && stream.entries().front().date < 0) {
        result.warnings.push_back("flow '" + name + "' starts at negative date " +
                                  stream.entries().front().date.str());
      }
    }
    result.flows = std::move(streams);
    return result;
  }

 private:
  static constexpr int kMaxPasses = 100000;

  std::vector<TaggedStream> eval(const Expr& e,
                                 const std::map<std::string, TaggedStream>& env) {
    switch (e.kind) {
      case ExprKind::Var: {
        auto it = env.find(e.name);
        if (it == env.end()) throw SimError("flow '" + e.name + "' is not in scope");
        return {it->second};
      }
      case ExprKind::ConstInt:
      case ExprKind::ConstBool:
        throw SimError("bare constant outside fby/cons");
      case ExprKind::MulClock:
        return {sim_mul(eval_single(*e.args[0], env), e.int_value)};
      case ExprKind::DivClock:
        return {sim_div(eval_single(*e.args[0], env), e.int_value)};
      case ExprKind::DivQueue:
        return {sim_div_queue(eval_single(*e.args[0], env), e.int_value)};
      case ExprKind::ShiftClock:
        return {sim_shift(eval_single(*e.args[0], env), e.rat_value)};
      case ExprKind::Fby:
        return {sim_fby(literal_value(*e.args[0]), eval_single(*e.args[1], env))};
      case ExprKind::Cons:
        return {sim_cons(eval_single(*e.args[1], env), literal_value(*e.args[0]))};
      case ExprKind::Tail:
        return {sim_tail(eval_single(*e.args[0], env))};
      case ExprKind::When:
        return {sim_when(eval_single(*e.args[0], env), eval_single(*e.args[1], env))};
      case ExprKind::Merge:
        return {sim_merge(eval_single(*e.args[0], env), eval_single(*e.args[1], env),
                          eval_single(*e.args[2], env))};
      case ExprKind::Call:
        return eval_call(e, env);
    }
    throw SimError("unknown expression kind");
  }

  TaggedStream eval_single(const Expr& e, const std::map<std::string, TaggedStream>& env) {
    std::vector<TaggedStream> out = eval(e, env);
    if (out.size() != 1) throw SimError("expression produces more than one flow");
    return std::move(out[0]);
  }

  std::vector<TaggedStream> eval_call(const Expr& e,
                                      const std::map<std::string, TaggedStream>& env) {
    const NodeSignature& sig = checked_.signatures.at(e.name);
    std::vector<TaggedStream> args;
    for (const ExprPtr& a : e.args) args.push_back(eval_single(*a, env));

    if (sig.imported) {
      if (auto stub = cfg_.stubs.find(e.name); stub != cfg_.stubs.end()) {
        std::vector<TaggedStream> out = stub->second(args, sig);
        if (out.size() != sig.outputs.size()) {
          throw SimError("stub for node '" + e.name + "' returned " +
                         std::to_string(out.size()) + " flows, expected " +
                         std::to_string(sig.outputs.size()));
        }
        return out;
      }
      if (args.size() == 1) {
        std::vector<TaggedStream> out;
        for (const SignatureParam& o : sig.outputs) {
          out.push_back(restamp(args[0], o.type.clock));
        }
        return out;
      }
      throw MissingStubError("imported node '" + e.name + "' takes " +
                             std::to_string(args.size()) +
                             " inputs and needs a registered stub");
    }

    const NodeDecl* callee = find_node(program_, e.name);
    if (!callee) throw SimError("node '" + e.name + "' not found");
    std::map<std::string, TaggedStream> callee_inputs;
    for (std::size_t j = 0; j < callee->inputs.size(); ++j) {
      callee_inputs.emplace(callee->inputs[j].name, clip_stream(args[j], t_end_));
    }
    SimResult nested = NodeSim(program_, checked_, cfg_, t_end_).run(*callee, std::move(callee_inputs));
    std::vector<TaggedStream> out;
    for (const FlowDecl& o : callee->outputs) {
      out.push_back(nested.flows.at(o.name));
    }
    return out;
  }

  const Program& program_;
  const CheckResult& checked_;
  const SimConfig& cfg_;
  BigInt t_end_;
};

}  // namespace

SimResult sim_node(const Program& p, const CheckResult& checked, const std::string& node,
                   const SimConfig& cfg) {
  if (cfg.horizon < 1) throw SimError("horizon must be at least 1");
  if (!checked.ok()) throw SimError("program was rejected by the checker");
  const NodeDecl* decl = find_node(p, node);
  if (!decl) throw SimError("node '" + node + "' does not exist");
  if (decl->imported) throw SimError("node '" + node + "' is imported and has no equations");
  const NodeTypes& types = checked.node_types.at(node);
  if (types.flows.empty()) throw SimError("node '" + node + "' declares no flows");

  std::vector<Clock> clocks;
  for (const auto& [name, t] : types.flows) clocks.push_back(t.clock);
  BigInt t_end = hyperperiod(clocks) * cfg.horizon;

  std::map<std::string, TaggedStream> inputs;
  for (const FlowDecl& d : decl->inputs) {
    const FlowType& t = types.flows.at(d.name);
    Generator gen;
    if (auto it = cfg.input_generators.find(d.name); it != cfg.input_generators.end()) {
      gen = it->second;
    } else {
      ValueType vt = t.value_type;
      gen = [vt](const BigInt& i) { return default_value(vt, i); };
    }
    inputs.emplace(d.name, sim_source(t.clock, gen, target_count(t.clock, t_end)));
  }

  return NodeSim(p, checked, cfg, t_end).run(*decl, std::move(inputs));
}

SimResult sim_node(const Program& p, const std::string& node, const SimConfig& cfg) {
  CheckResult checked = check_program(p);
  if (!checked.ok()) throw SimError("program was rejected by the checker");
  return sim_node(p, checked, node, cfg);
}

}  // namespace preludec
