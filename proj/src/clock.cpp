#include "preludec/clock.hpp"

#include <stdexcept>

namespace preludec {

namespace {

ClockError non_positive_factor(const BigInt& factor) {
  return {ClockErrorKind::NonPositiveFactor, "factor " + factor.str() + " is not positive"};
}

}  // namespace

Checked<Clock> Clock::validate(BigInt period, Rational phase) {
  if (period <= 0) {
    return ClockError{ClockErrorKind::NonPositivePeriod,
                      "period " + period.str() + " is not positive"};
  }
  Rational start = Rational(period) * phase;
  if (!start.is_integer()) {
    return ClockError{ClockErrorKind::NonIntegerStartDate,
                      "start date " + start.to_string() + " is not an integer"};
  }
  return Clock(std::move(period), std::move(phase));
}

BigInt Clock::start_date() const { return (Rational(period_) * phase_).to_integer(); }

BigInt Clock::date_at(const BigInt& index) const {
  return (Rational(period_) * (phase_ + Rational(index))).to_integer();
}

std::string Clock::to_string() const {
  return "(" + period_.str() + ", " + phase_.to_string() + ")";
}

Checked<Clock> oversample(const Clock& c, const BigInt& factor) {
  if (factor < 1) return non_positive_factor(factor);
  if (c.period() % factor != 0) {
    return ClockError{ClockErrorKind::DivisibilityViolation,
                      "factor " + factor.str() + " does not divide period " + c.period().str()};
  }
  return Clock(c.period() / factor, c.phase() * Rational(factor));
}

Checked<Clock> undersample(const Clock& c, const BigInt& factor) {
  if (factor < 1) return non_positive_factor(factor);
  if (c.period() % factor != 0) {
    return ClockError{ClockErrorKind::DivisibilityViolation,
                      "factor " + factor.str() + " does not divide period " + c.period().str()};
  }
  return Clock(c.period() * factor, c.phase() / Rational(factor));
}

Checked<Clock> shift_phase(const Clock& c, const Rational& amount, ShiftPolicy policy) {
  Rational step = Rational(c.period()) * amount;
  if (!step.is_integer()) {
    return ClockError{ClockErrorKind::NonIntegerShift,
                      "shift by " + amount.to_string() + " moves the start date by the non-integer amount " +
                          step.to_string()};
  }
  if (policy == ShiftPolicy::NonNegativeOnly && amount.is_negative()) {
    return ClockError{ClockErrorKind::NegativeShift,
                      "shift by " + amount.to_string() + " is negative"};
  }
  return Clock(c.period(), c.phase() + amount);
}

Clock cons_clock(const Clock& c) { return Clock(c.period(), c.phase() - Rational(1)); }

Clock tail_clock(const Clock& c) { return Clock(c.period(), c.phase() + Rational(1)); }

Clock fby_clock(const Clock& c) { return c; }

Checked<WindowedClock> queue_undersample(const Clock& c, const BigInt& factor) {
  if (factor < 1) return non_positive_factor(factor);
  return WindowedClock{Clock(c.period() * factor, c.phase() / Rational(factor)), factor};
}

BigInt hyperperiod(std::span<const Clock> clocks) {
  if (clocks.empty()) throw std::invalid_argument("hyperperiod of no clocks");
  BigInt acc = 1;
  for (const Clock& c : clocks) acc = boost::multiprecision::lcm(acc, c.period());
  return acc;
}

}  // namespace preludec
