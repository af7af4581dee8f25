#include "preludec/emitter.hpp"

#include <map>
#include <set>
#include <sstream>
#include <vector>

namespace preludec {

std::string render_ir_type(const FlowType& t) {
  std::string out = t.kind == FlowKind::Strict ? "SFlow (" : "BFlow (";
  out += t.value_type.to_string();
  out += ", ";
  out += t.clock.period().str();
  out += ", ";
  out += t.clock.phase().to_string();
  out += ")";
  return out;
}

namespace {

// Renders an expression tree; subtrees present in the replacement map
// render as their hoisted temporary instead.
class ExprRenderer {
 public:
  explicit ExprRenderer(const std::map<const Expr*, std::string>* repl = nullptr)
      : repl_(repl) {}

  std::string render(const Expr& e) const {
    if (repl_) {
      if (auto it = repl_->find(&e); it != repl_->end()) return it->second;
    }
    switch (e.kind) {
      case ExprKind::Var:
        return e.name;
      case ExprKind::ConstInt:
        return e.int_value.str();
      case ExprKind::ConstBool:
        return e.bool_value ? "true" : "false";
      case ExprKind::MulClock:
        return "flow_mul_clock (" + render(*e.args[0]) + ", " + e.int_value.str() + ")";
      case ExprKind::DivClock:
        return "flow_div_clock (" + render(*e.args[0]) + ", " + e.int_value.str() + ")";
      case ExprKind::DivQueue:
        return "flow_div_queue (" + render(*e.args[0]) + ", " + e.int_value.str() + ")";
      case ExprKind::ShiftClock:
        return "flow_shift (" + render(*e.args[0]) + ", " + e.rat_value.to_string() + ")";
      case ExprKind::Fby:
        return "flow_fby (" + render(*e.args[0]) + ", " + render(*e.args[1]) + ")";
      case ExprKind::Cons:
        return "flow_cons (" + render(*e.args[0]) + ", " + render(*e.args[1]) + ")";
      case ExprKind::Tail:
        return "flow_tail (" + render(*e.args[0]) + ")";
      case ExprKind::When:
        // the condition moves to the first argument
        return "flow_when (" + render(*e.args[1]) + ", " + render(*e.args[0]) + ")";
      case ExprKind::Merge:
        return "flow_merge (" + render(*e.args[0]) + ", " + render(*e.args[1]) + ", " +
               render(*e.args[2]) + ")";
      case ExprKind::Call: {
        std::string out = e.name + " (";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i) out += ", ";
          out += render(*e.args[i]);
        }
        out += ")";
        return out;
      }
    }
    throw EmitError("unknown expression kind");
  }

 private:
  const std::map<const Expr*, std::string>* repl_;
};

void collect_var_reads(const Expr& e, std::vector<std::string>& order) {
  if (e.kind == ExprKind::Var) order.push_back(e.name);
  for (const ExprPtr& a : e.args) collect_var_reads(*a, order);
}

class NodeEmitter {
 public:
  NodeEmitter(const NodeDecl& node, const CheckResult& checked)
      : node_(node),
        sig_(checked.signatures.at(node.name)),
        types_(node.imported ? nullptr : &checked.node_types.at(node.name)) {}

  std::string emit() {
    if (node_.imported) {
      return "extern fun " + node_.name + " (" + params() + "): (" + returns() + ")\n";
    }
    plan_futures();
    std::ostringstream out;
    out << "fun " << node_.name << " (" << params() << "): (" << returns() << ") = let\n";
    for (const std::string& f : future_order_) {
      out << "  var " << f << " : " << render_ir_type(types_->flows.at(f)) << "\n";
      out << "  prval pf" << f << " = flow_future_make (" << f << ")\n";
    }
    for (std::size_t i = 0; i < node_.equations.size(); ++i) {
      emit_equation(out, node_.equations[i], i);
    }
    for (const std::string& f : future_order_) {
      out << "  prval () = flow_future_elim (pf" << f << ", " << f << ", " << f << "')\n";
    }
    out << "in\n  (";
    for (std::size_t i = 0; i < node_.outputs.size(); ++i) {
      if (i) out << ", ";
      out << node_.outputs[i].name;
    }
    out << ")\nend\n";
    return out.str();
  }

 private:
  std::string params() const {
    std::string out;
    for (std::size_t i = 0; i < sig_.inputs.size(); ++i) {
      if (i) out += ", ";
      out += sig_.inputs[i].name + ": " + render_ir_type(sig_.inputs[i].type);
    }
    return out;
  }

  std::string returns() const {
    std::string out;
    for (std::size_t i = 0; i < sig_.outputs.size(); ++i) {
      if (i) out += ", ";
      out += render_ir_type(sig_.outputs[i].type);
    }
    return out;
  }

  // Futures cover every local plus each output that is read back. Order is
  // first read over the equations, then never-read locals in declaration
  // order, so makes appear just where a reader first needs the flow.
  void plan_futures() {
    for (const FlowDecl& d : node_.inputs) flow_names_.insert(d.name);
    std::set<std::string> outputs;
    for (const FlowDecl& d : node_.outputs) {
      flow_names_.insert(d.name);
      outputs.insert(d.name);
    }
    std::set<std::string> locals;
    for (const FlowDecl& d : node_.locals) {
      flow_names_.insert(d.name);
      locals.insert(d.name);
    }

    std::vector<std::string> reads;
    for (std::size_t i = 0; i < node_.equations.size(); ++i) {
      collect_var_reads(*node_.equations[i].rhs, reads);
      for (const std::string& lhs : node_.equations[i].lhs) {
        def_index_.emplace(lhs, i);
      }
    }
    std::set<std::string> read_set(reads.begin(), reads.end());
    for (const std::string& name : locals) future_set_.insert(name);
    for (const std::string& name : outputs) {
      if (read_set.count(name)) future_set_.insert(name);
    }
    std::set<std::string> placed;
    for (const std::string& name : reads) {
      if (future_set_.count(name) && placed.insert(name).second) {
        future_order_.push_back(name);
      }
    }
    for (const FlowDecl& d : node_.locals) {
      if (placed.insert(d.name).second) future_order_.push_back(d.name);
    }
  }

  void emit_equation(std::ostringstream& out, const Equation& eq, std::size_t eq_index) {
    std::map<const Expr*, std::string> repl;
    std::set<std::string> used_tmp;
    hoist(out, *eq.rhs, eq.rhs.get(), eq_index, repl, used_tmp);

    ExprRenderer renderer(&repl);
    out << "  val ";
    if (eq.lhs.size() == 1) {
      out << binding_name(eq.lhs[0]);
    } else {
      out << "(";
      for (std::size_t i = 0; i < eq.lhs.size(); ++i) {
        if (i) out << ", ";
        out << binding_name(eq.lhs[i]);
      }
      out << ")";
    }
    out << " = " << renderer.render(*eq.rhs) << "\n";
  }

  std::string binding_name(const std::string& flow) const {
    return future_set_.count(flow) ? flow + "'" : flow;
  }

  // Every fby/cons below the root gets its own val binding, innermost first.
  void hoist(std::ostringstream& out, const Expr& e, const Expr* root, std::size_t eq_index,
             std::map<const Expr*, std::string>& repl, std::set<std::string>& used_tmp) {
    for (const ExprPtr& a : e.args) hoist(out, *a, root, eq_index, repl, used_tmp);
    if (&e == root) return;
    if (e.kind != ExprKind::Fby && e.kind != ExprKind::Cons) return;
    std::string tmp = pick_tmp(e, eq_index, used_tmp);
    ExprRenderer renderer(&repl);
    out << "  val " << tmp << " = " << renderer.render(e) << "\n";
    repl.emplace(&e, tmp);
  }

  // Prefer y' when the operand is the flow y, unless that prime is already
  // taken in this equation or y's definition has already been emitted: the
  // elim for y must still see the defining binding of y' at the end.
  std::string pick_tmp(const Expr& e, std::size_t eq_index, std::set<std::string>& used_tmp) {
    const Expr& stream = *e.args[1];
    if (stream.kind == ExprKind::Var) {
      std::string candidate = stream.name + "'";
      bool safe = !used_tmp.count(candidate);
      if (safe && future_set_.count(stream.name)) {
        auto it = def_index_.find(stream.name);
        safe = it == def_index_.end() || it->second >= eq_index;
      }
      if (safe) {
        used_tmp.insert(candidate);
        return candidate;
      }
    }
    std::string fresh;
    do {
      fresh = "t" + std::to_string(tmp_counter_++);
    } while (flow_names_.count(fresh));
    fresh += "'";
    used_tmp.insert(fresh);
    return fresh;
  }

  const NodeDecl& node_;
  const NodeSignature& sig_;
  const NodeTypes* types_;
  std::set<std::string> flow_names_;
  std::set<std::string> future_set_;
  std::vector<std::string> future_order_;
  std::map<std::string, std::size_t> def_index_;
  int tmp_counter_ = 1;
};

}  // namespace

std::string render_ir_expr(const Expr& e) {
  return ExprRenderer().render(e);
}

std::string emit_typed_ir(const Program& p, const CheckResult& checked) {
  if (!checked.ok()) {
    throw EmitError("cannot emit typed IR for a program with check errors");
  }
  std::vector<std::string> items;
  items.push_back("(* typed flow IR emitted by preludec *)\n");
  for (const NodeDecl& node : p.nodes) {
    items.push_back(NodeEmitter(node, checked).emit());
  }
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += "\n";
    out += items[i];
  }
  return out;
}

}  // namespace preludec
