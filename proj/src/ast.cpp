#include "preludec/ast.hpp"

#include <sstream>

namespace preludec {

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::IntLit: return "integer literal";
    case TokenKind::RatLit: return "rational literal";
    case TokenKind::KwImported: return "'imported'";
    case TokenKind::KwNode: return "'node'";
    case TokenKind::KwReturns: return "'returns'";
    case TokenKind::KwVar: return "'var'";
    case TokenKind::KwLet: return "'let'";
    case TokenKind::KwTel: return "'tel'";
    case TokenKind::KwSensor: return "'sensor'";
    case TokenKind::KwActuator: return "'actuator'";
    case TokenKind::KwRate: return "'rate'";
    case TokenKind::KwFby: return "'fby'";
    case TokenKind::KwWhen: return "'when'";
    case TokenKind::KwMerge: return "'merge'";
    case TokenKind::KwTail: return "'tail'";
    case TokenKind::KwCons: return "'cons'";
    case TokenKind::KwQueue: return "'queue'";
    case TokenKind::KwInt: return "'int'";
    case TokenKind::KwBool: return "'bool'";
    case TokenKind::KwTrue: return "'true'";
    case TokenKind::KwFalse: return "'false'";
    case TokenKind::MulOp: return "'*^'";
    case TokenKind::DivOp: return "'/^'";
    case TokenKind::DivQueueOp: return "'/^^'";
    case TokenKind::ShiftOp: return "'~>'";
    case TokenKind::Equals: return "'='";
    case TokenKind::Comma: return "','";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Colon: return "':'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::EndOfFile: return "end of file";
  }
  return "token";
}

ExprPtr clone_expr(const Expr& e) {
  auto out = std::make_unique<Expr>();
  out->kind = e.kind;
  out->loc = e.loc;
  out->name = e.name;
  out->int_value = e.int_value;
  out->bool_value = e.bool_value;
  out->rat_value = e.rat_value;
  out->args.reserve(e.args.size());
  for (const ExprPtr& a : e.args) out->args.push_back(clone_expr(*a));
  return out;
}

const NodeDecl* find_node(const Program& p, const std::string& name) {
  for (const NodeDecl& n : p.nodes) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

namespace {

// Binding strength, loosest first: fby < when < postfix rate operators.
enum Level { LevelFby = 0, LevelWhen = 1, LevelPostfix = 2 };

void print_expr(std::ostringstream& out, const Expr& e, int min_level) {
  auto parenthesize = [&](int level, auto&& body) {
    bool need = level < min_level;
    if (need) out << '(';
    body();
    if (need) out << ')';
  };
  switch (e.kind) {
    case ExprKind::Var:
      out << e.name;
      return;
    case ExprKind::ConstInt:
      out << e.int_value;
      return;
    case ExprKind::ConstBool:
      out << (e.bool_value ? "true" : "false");
      return;
    case ExprKind::MulClock:
    case ExprKind::DivClock:
    case ExprKind::DivQueue:
      parenthesize(LevelPostfix, [&] {
        print_expr(out, *e.args[0], LevelPostfix);
        out << (e.kind == ExprKind::MulClock ? " *^ "
                : e.kind == ExprKind::DivClock ? " /^ "
                                               : " /^^ ");
        out << e.int_value;
      });
      return;
    case ExprKind::ShiftClock:
      parenthesize(LevelPostfix, [&] {
        print_expr(out, *e.args[0], LevelPostfix);
        out << " ~> " << e.rat_value;
      });
      return;
    case ExprKind::Fby:
      parenthesize(LevelFby, [&] {
        // Right associative: the head re-parenthesizes at when level.
        print_expr(out, *e.args[0], LevelWhen);
        out << " fby ";
        print_expr(out, *e.args[1], LevelFby);
      });
      return;
    case ExprKind::When:
      parenthesize(LevelWhen, [&] {
        print_expr(out, *e.args[0], LevelWhen);
        out << " when ";
        print_expr(out, *e.args[1], LevelPostfix);
      });
      return;
    case ExprKind::Cons:
      out << "cons(";
      print_expr(out, *e.args[0], LevelFby);
      out << ", ";
      print_expr(out, *e.args[1], LevelFby);
      out << ')';
      return;
    case ExprKind::Tail:
      out << "tail(";
      print_expr(out, *e.args[0], LevelFby);
      out << ')';
      return;
    case ExprKind::Merge:
      out << "merge(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out << ", ";
        print_expr(out, *e.args[i], LevelFby);
      }
      out << ')';
      return;
    case ExprKind::Call:
      out << e.name << '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out << ", ";
        print_expr(out, *e.args[i], LevelFby);
      }
      out << ')';
      return;
  }
}

void print_flow_decl(std::ostringstream& out, const FlowDecl& d) {
  // The value type is printed even where the source omitted it (int is the
  // default); the round trip compares ASTs, not text.
  out << d.name << ": " << (d.value_type == SimpleType::Bool ? "bool" : "int") << " rate ("
      << d.rate.period << ", " << d.rate.phase << ')';
}

}  // namespace

std::string expr_to_source(const Expr& e) {
  std::ostringstream out;
  print_expr(out, e, LevelFby);
  return out.str();
}

std::string program_to_source(const Program& p) {
  std::ostringstream out;
  for (const EnvDecl& s : p.sensors) out << "sensor " << s.name << ";\n";
  for (const EnvDecl& a : p.actuators) out << "actuator " << a.name << ";\n";
  if (!p.sensors.empty() || !p.actuators.empty()) out << '\n';
  for (const NodeDecl& n : p.nodes) {
    if (n.imported) out << "imported ";
    out << "node " << n.name << " (";
    for (std::size_t i = 0; i < n.inputs.size(); ++i) {
      if (i) out << "; ";
      print_flow_decl(out, n.inputs[i]);
    }
    out << ") returns (";
    for (std::size_t i = 0; i < n.outputs.size(); ++i) {
      if (i) out << "; ";
      print_flow_decl(out, n.outputs[i]);
    }
    out << ')';
    if (n.imported) {
      out << ";\n\n";
      continue;
    }
    out << '\n';
    for (const FlowDecl& v : n.locals) {
      out << "  var ";
      print_flow_decl(out, v);
      out << ";\n";
    }
    out << "let\n";
    for (const Equation& eq : n.equations) {
      out << "  ";
      if (eq.lhs.size() == 1) {
        out << eq.lhs[0];
      } else {
        out << '(';
        for (std::size_t i = 0; i < eq.lhs.size(); ++i) {
          if (i) out << ", ";
          out << eq.lhs[i];
        }
        out << ')';
      }
      out << " = " << expr_to_source(*eq.rhs) << ";\n";
    }
    out << "tel\n\n";
  }
  std::string text = out.str();
  while (text.size() >= 2 && text[text.size() - 1] == '\n' && text[text.size() - 2] == '\n') {
    text.pop_back();
  }
  return text;
}

}  // namespace preludec
