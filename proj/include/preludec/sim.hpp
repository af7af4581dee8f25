#pragma once

#include "preludec/ast.hpp"
#include "preludec/clock.hpp"
#include "preludec/elaborator.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace preludec {

class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingStubError : public SimError {
 public:
  using SimError::SimError;
};

class Value {
 public:
  Value() : v_(BigInt(0)) {}
  explicit Value(BigInt i) : v_(std::move(i)) {}
  explicit Value(bool b) : v_(b) {}
  explicit Value(std::vector<Value> elems) : v_(std::move(elems)) {}

  bool is_int() const { return std::holds_alternative<BigInt>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_array() const { return std::holds_alternative<std::vector<Value>>(v_); }
  const BigInt& as_int() const { return std::get<BigInt>(v_); }
  bool as_bool() const { return std::get<bool>(v_); }
  const std::vector<Value>& elements() const { return std::get<std::vector<Value>>(v_); }

  std::string to_string() const;  // arrays render [v1,...,vk]
  bool operator==(const Value& other) const = default;

 private:
  std::variant<BigInt, bool, std::vector<Value>> v_;
};

struct Entry {
  Value value;
  BigInt date;

  bool operator==(const Entry& other) const = default;
};

// A finite prefix of a flow. Construction validates the date law, so any
// stream that exists is consistent with its clock:
//   Strict:  entry i sits exactly at date n*(p+i)
//   Boolean: dates are a strictly increasing subset of the clock's dates
class TaggedStream {
 public:
  TaggedStream(Clock source_clock, FlowKind kind, std::vector<Entry> entries);

  static TaggedStream strict(Clock c, std::vector<Entry> entries) {
    return TaggedStream(std::move(c), FlowKind::Strict, std::move(entries));
  }

  const Clock& clock() const { return clock_; }
  FlowKind kind() const { return kind_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool operator==(const TaggedStream& other) const;

 private:
  Clock clock_;
  FlowKind kind_;
  std::vector<Entry> entries_;
};

using Generator = std::function<Value(const BigInt& index)>;

TaggedStream sim_source(const Clock& c, const Generator& gen, const BigInt& count);
TaggedStream sim_mul(const TaggedStream& s, const BigInt& k);
TaggedStream sim_div(const TaggedStream& s, const BigInt& k);
TaggedStream sim_shift(const TaggedStream& s, const Rational& q);
TaggedStream sim_cons(const TaggedStream& s, const Value& x);
TaggedStream sim_tail(const TaggedStream& s);
TaggedStream sim_fby(const Value& x, const TaggedStream& s);
TaggedStream sim_when(const TaggedStream& data, const TaggedStream& cond);
TaggedStream sim_merge(const TaggedStream& cond, const TaggedStream& on_true,
                       const TaggedStream& on_false);
TaggedStream sim_div_queue(const TaggedStream& s, const BigInt& k);

// Drops entries at date >= t_end; never drops from the front.
TaggedStream clip_stream(const TaggedStream& s, const BigInt& t_end);

// A stub receives the argument streams and must return one stream per output,
// on the output clocks of the given signature.
using NodeStub =
    std::function<std::vector<TaggedStream>(const std::vector<TaggedStream>& inputs,
                                            const NodeSignature& sig)>;

struct SimConfig {
  BigInt horizon = 1;  // number of hyperperiods; must be >= 1
  std::map<std::string, Generator> input_generators;
  std::map<std::string, NodeStub> stubs;  // imported node name -> stub
};

struct SimResult {
  std::map<std::string, TaggedStream> flows;  // every declared flow
  std::vector<std::string> output_names;
  BigInt t_end;
  bool converged = true;  // every flow reached its target entry count
  std::vector<std::string> warnings;

  std::map<std::string, TaggedStream> outputs() const;
};

SimResult sim_node(const Program& p, const CheckResult& checked, const std::string& node,
                   const SimConfig& cfg);
// Convenience form that runs the elaborator itself and throws SimError when
// the program is rejected.
SimResult sim_node(const Program& p, const std::string& node, const SimConfig& cfg);

// One line per entry: `<flow> <date> <value>`, flows alphabetical, dates
// ascending.
std::string dump_streams(const std::map<std::string, TaggedStream>& streams);

}  // namespace preludec
