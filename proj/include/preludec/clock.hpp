#pragma once

#include "preludec/rational.hpp"

#include <span>
#include <string>
#include <variant>

namespace preludec {

enum class ClockErrorKind {
  NonPositivePeriod,
  NonIntegerStartDate,
  NonPositiveFactor,
  DivisibilityViolation,
  NonIntegerShift,
  NegativeShift,  // only under ShiftPolicy::NonNegativeOnly
};

struct ClockError {
  ClockErrorKind kind;
  std::string message;
};

/// Outcome of a clock-calculus operation whose precondition may fail. The
/// failure side carries a ClockError describing the violated premise.
template <typename T>
class Checked {
 public:
  Checked(T value) : state_(std::move(value)) {}
  Checked(ClockError error) : state_(std::move(error)) {}

  bool ok() const { return std::holds_alternative<T>(state_); }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    if (!ok()) throw std::logic_error("Checked::value on error: " + error().message);
    return std::get<T>(state_);
  }

  const ClockError& error() const {
    if (ok()) throw std::logic_error("Checked::error on success");
    return std::get<ClockError>(state_);
  }

 private:
  std::variant<T, ClockError> state_;
};

enum class ShiftPolicy {
  AllowNegative,    // any shift with n*q integral, including advances
  NonNegativeOnly,  // additionally require q >= 0
};

/// A strictly periodic clock (n, p): positive integer period n in time units
/// and rational phase offset p, a dimensionless multiplier of the period.
/// Invariant: n >= 1 and n*p is an integer, so the start date n*p is an
/// exact date. Negative start dates are valid; callers that care warn on
/// them separately.
class Clock {
 public:
  /// The only gate into the type: rejects non-positive periods and clocks
  /// whose start date n*p is not an integer.
  static Checked<Clock> validate(BigInt period, Rational phase);

  const BigInt& period() const { return period_; }
  const Rational& phase() const { return phase_; }

  /// Activation date of a flow on this clock: n * p, always an integer.
  BigInt start_date() const;

  /// Date of the i-th value of a strictly periodic flow: n * (p + i).
  BigInt date_at(const BigInt& index) const;

  /// Renders as "(n, p)" using the rational text form, e.g. "(10, 1/2)".
  std::string to_string() const;

  bool operator==(const Clock& other) const = default;

 private:
  Clock(BigInt period, Rational phase) : period_(std::move(period)), phase_(std::move(phase)) {}

  BigInt period_;
  Rational phase_;

  friend Checked<Clock> oversample(const Clock&, const BigInt&);
  friend Checked<Clock> undersample(const Clock&, const BigInt&);
  friend Checked<Clock> shift_phase(const Clock&, const Rational&, ShiftPolicy);
  friend Clock cons_clock(const Clock&);
  friend Clock tail_clock(const Clock&);
  friend Checked<struct WindowedClock> queue_undersample(const Clock&, const BigInt&);
};

/// Clock effect of the over-sampling operator `*^ k`: the period shrinks to
/// n/k and every value is repeated k times. Requires k >= 1 and k | n; the
/// start date is preserved since (n/k)*(p*k) = n*p.
Checked<Clock> oversample(const Clock& c, const BigInt& factor);

/// Clock effect of the under-sampling operator `/^ k`: the period stretches
/// to n*k and one value in k is kept. Requires k >= 1 and k | n; the start
/// date is preserved since (n*k)*(p/k) = n*p.
Checked<Clock> undersample(const Clock& c, const BigInt& factor);

/// Clock effect of the phase-shift operator `~> q`: phase becomes p + q.
/// Requires n*q integral so the result still starts on an integer date.
Checked<Clock> shift_phase(const Clock& c, const Rational& amount,
                           ShiftPolicy policy = ShiftPolicy::AllowNegative);

/// Clock effect of cons: prepending a value starts the flow one period
/// earlier, so the phase drops to p - 1. Unconditional; may produce a
/// negative start date.
Clock cons_clock(const Clock& c);

/// Clock effect of tail: dropping the first value delays activation by one
/// period, so the phase rises to p + 1.
Clock tail_clock(const Clock& c);

/// Clock effect of fby: none. Definitionally cons_clock of a one-period
/// shift, which cancels back to the input clock.
Clock fby_clock(const Clock& c);

struct WindowedClock {
  Clock clock;
  BigInt window;  // values of the result are window-element arrays
};

/// Clock effect of the queuing under-sample `/^^ k`: same clock as `/^ k`
/// but each kept tick carries the k most recent values. Requires only k >= 1.
Checked<WindowedClock> queue_undersample(const Clock& c, const BigInt& factor);

/// Least common multiple of the periods; the natural simulation window.
/// Requires a nonempty span.
BigInt hyperperiod(std::span<const Clock> clocks);

}  // namespace preludec
