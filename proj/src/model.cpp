#include "qdiff/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qdiff/errors.hpp"

namespace qdiff {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double dpow(double base, Index n) { return std::pow(base, static_cast<double>(n)); }

[[noreturn]] void no_tail(const std::string& kind) {
  throw DivergenceError("non-summable or unknown tail for sequence kind '" + kind + "'");
}

ValueRange point_range(double v) { return ValueRange{v, v, true, true, v, true}; }

// Range of c * rho^n over n >= from.
ValueRange geometric_range(double c, double rho, Index from) {
  if (c == 0.0 || rho == 0.0) return point_range(0.0);
  const double t1 = c * dpow(rho, from);
  const double t2 = c * dpow(rho, from + 1);
  if (rho == 1.0) return point_range(c);
  if (rho == -1.0) return ValueRange{-std::abs(c), std::abs(c), true, true, std::nullopt, true};
  if (std::abs(rho) < 1.0) {
    if (rho > 0.0) {
      return c > 0.0 ? ValueRange{0.0, t1, false, true, 0.0, true} : ValueRange{t1, 0.0, true, false, 0.0, true};
    }
    return ValueRange{std::min(t1, t2), std::max(t1, t2), true, true, 0.0, true};
  }
  if (rho > 1.0) {
    return c > 0.0 ? ValueRange{t1, kInf, true, false, std::nullopt, true}
                   : ValueRange{-kInf, t1, false, true, std::nullopt, true};
  }
  return ValueRange{-kInf, kInf, false, false, std::nullopt, true};
}

// Range of a sequence whose magnitude decreases to 0 and keeps the sign of c.
ValueRange decaying_range(double first) {
  if (first == 0.0) return point_range(0.0);
  return first > 0.0 ? ValueRange{0.0, first, false, true, 0.0, true} : ValueRange{first, 0.0, true, false, 0.0, true};
}

ValueRange merge(const ValueRange& x, const ValueRange& y) {
  ValueRange out;
  if (x.inf < y.inf) {
    out.inf = x.inf, out.inf_attained = x.inf_attained;
  } else if (y.inf < x.inf) {
    out.inf = y.inf, out.inf_attained = y.inf_attained;
  } else {
    out.inf = x.inf, out.inf_attained = x.inf_attained || y.inf_attained;
  }
  if (x.sup > y.sup) {
    out.sup = x.sup, out.sup_attained = x.sup_attained;
  } else if (y.sup > x.sup) {
    out.sup = y.sup, out.sup_attained = y.sup_attained;
  } else {
    out.sup = x.sup, out.sup_attained = x.sup_attained || y.sup_attained;
  }
  out.exact = x.exact && y.exact;
  return out;
}

}  // namespace

bool seq::Table::operator==(const Table& other) const {
  if (start != other.start || values != other.values || finite_support != other.finite_support) return false;
  if (static_cast<bool>(tail) != static_cast<bool>(other.tail)) return false;
  return !tail || *tail == *other.tail;
}

double ValueRange::sup_abs() const { return std::max(std::abs(inf), std::abs(sup)); }

bool ValueRange::sup_abs_attained() const {
  if (std::abs(inf) > std::abs(sup)) return inf_attained;
  if (std::abs(sup) > std::abs(inf)) return sup_attained;
  return inf_attained || sup_attained;
}

SequenceSpec::SequenceSpec(SequenceForm form, std::string name) : form_(std::move(form)), name_(std::move(name)) {}

SequenceSpec zero_sequence() { return SequenceSpec(seq::Constant{0.0}, "zero"); }

std::string SequenceSpec::kind() const {
  return std::visit(overloaded{
                        [](const seq::Geometric&) -> std::string { return "geometric"; },
                        [](const seq::Power&) -> std::string { return "power"; },
                        [](const seq::Alternating&) -> std::string { return "alternating"; },
                        [](const seq::OddProductReciprocal&) -> std::string { return "odd-product-reciprocal"; },
                        [](const seq::RisingFourReciprocal&) -> std::string { return "rising-four-reciprocal"; },
                        [](const seq::AffineGeometric& s) -> std::string {
                          return s.offset == 1.0 && s.c == -1.0 ? "one-minus-geometric" : "affine-geometric";
                        },
                        [](const seq::Constant&) -> std::string { return "constant"; },
                        [](const seq::Table&) -> std::string { return "table"; },
                    },
                    form_);
}

double SequenceSpec::eval(Index n) const {
  if (n < 1) throw PreconditionError("sequence index must be >= 1, got " + std::to_string(n));
  const double nd = static_cast<double>(n);
  return std::visit(overloaded{
                        [&](const seq::Geometric& s) { return s.c * dpow(s.rho, n); },
                        [&](const seq::Power& s) { return s.c * std::pow(nd, s.alpha); },
                        [&](const seq::Alternating& s) { return n % 2 == 0 ? s.c : -s.c; },
                        [&](const seq::OddProductReciprocal& s) { return s.c / ((2.0 * nd - 1.0) * (2.0 * nd + 1.0)); },
                        [&](const seq::RisingFourReciprocal& s) {
                          return s.c / (nd * (nd + 1.0) * (nd + 2.0) * (nd + 3.0));
                        },
                        [&](const seq::AffineGeometric& s) { return s.offset + s.c * dpow(s.rho, n); },
                        [&](const seq::Constant& s) { return s.c; },
                        [&](const seq::Table& s) -> double {
                          if (n < s.start) throw PreconditionError("index before table start");
                          if (n <= s.end()) return s.values[static_cast<std::size_t>(n - s.start)];
                          if (s.tail) return s.tail->eval(n);
                          if (s.finite_support) return 0.0;
                          throw PreconditionError("table has no continuation past index " + std::to_string(s.end()));
                        },
                    },
                    form_);
}

double SequenceSpec::tail_majorant(Index n) const {
  if (n < 1) throw PreconditionError("tail_majorant needs n >= 1");
  const double nd = static_cast<double>(n);
  const std::string k = kind();
  return std::visit(overloaded{
                        [&](const seq::Geometric& s) -> double {
                          if (s.c == 0.0 || s.rho == 0.0) return 0.0;
                          const double r = std::abs(s.rho);
                          if (r >= 1.0) no_tail(k);
                          return std::abs(s.c) * dpow(r, n) / (1.0 - r);
                        },
                        [&](const seq::Power& s) -> double {
                          if (s.c == 0.0) return 0.0;
                          if (s.alpha >= -1.0) no_tail(k);
                          return std::abs(s.c) * (std::pow(nd, s.alpha) + std::pow(nd, s.alpha + 1.0) / (-s.alpha - 1.0));
                        },
                        [&](const seq::Alternating& s) -> double {
                          if (s.c != 0.0) no_tail(k);
                          return 0.0;
                        },
                        [&](const seq::OddProductReciprocal& s) -> double {
                          return std::abs(s.c) / (2.0 * (2.0 * nd - 1.0));
                        },
                        [&](const seq::RisingFourReciprocal& s) -> double {
                          return std::abs(s.c) / (3.0 * nd * (nd + 1.0) * (nd + 2.0));
                        },
                        [&](const seq::AffineGeometric& s) -> double {
                          if (s.offset != 0.0) no_tail(k);
                          return SequenceSpec(seq::Geometric{s.c, s.rho}).tail_majorant(n);
                        },
                        [&](const seq::Constant& s) -> double {
                          if (s.c != 0.0) no_tail(k);
                          return 0.0;
                        },
                        [&](const seq::Table& s) -> double {
                          double sum = 0.0;
                          for (Index t = std::max(n, s.start); t <= s.end(); ++t)
                            sum += std::abs(s.values[static_cast<std::size_t>(t - s.start)]);
                          const Index next = std::max(n, s.end() + 1);
                          if (s.tail) return sum + s.tail->tail_majorant(next);
                          if (s.finite_support) return sum;
                          throw DivergenceError("table without tail majorant (no tail and no finite support)");
                        },
                    },
                    form_);
}

Summability SequenceSpec::summability() const {
  return std::visit(overloaded{
                        [](const seq::Geometric& s) {
                          return s.c == 0.0 || std::abs(s.rho) < 1.0 ? Summability::summable : Summability::divergent;
                        },
                        [](const seq::Power& s) {
                          return s.c == 0.0 || s.alpha < -1.0 ? Summability::summable : Summability::divergent;
                        },
                        [](const seq::Alternating& s) { return s.c == 0.0 ? Summability::summable : Summability::divergent; },
                        [](const seq::OddProductReciprocal&) { return Summability::summable; },
                        [](const seq::RisingFourReciprocal&) { return Summability::summable; },
                        [](const seq::AffineGeometric& s) {
                          if (s.offset != 0.0) return Summability::divergent;
                          return s.c == 0.0 || std::abs(s.rho) < 1.0 ? Summability::summable : Summability::divergent;
                        },
                        [](const seq::Constant& s) { return s.c == 0.0 ? Summability::summable : Summability::divergent; },
                        [](const seq::Table& s) {
                          if (s.tail) return s.tail->summability();
                          return s.finite_support ? Summability::summable : Summability::unknown;
                        },
                    },
                    form_);
}

Majorant SequenceSpec::abs_majorant() const {
  return std::visit(overloaded{
                        [](const seq::Geometric& s) { return Majorant::term(std::abs(s.c), 0.0, std::abs(s.rho)); },
                        [](const seq::Power& s) { return Majorant::term(std::abs(s.c), s.alpha, 1.0); },
                        [](const seq::Alternating& s) { return Majorant::constant(std::abs(s.c)); },
                        [](const seq::OddProductReciprocal& s) { return Majorant::term(std::abs(s.c) / 3.0, -2.0, 1.0); },
                        [](const seq::RisingFourReciprocal& s) { return Majorant::term(std::abs(s.c), -4.0, 1.0); },
                        [](const seq::AffineGeometric& s) {
                          return Majorant::constant(std::abs(s.offset)) + Majorant::term(std::abs(s.c), 0.0, std::abs(s.rho));
                        },
                        [](const seq::Constant& s) { return Majorant::constant(std::abs(s.c)); },
                        [](const seq::Table& s) -> Majorant {
                          if (s.tail) return s.tail->abs_majorant().starting_at(s.end() + 1);
                          if (s.finite_support) return Majorant({}, s.end() + 1);
                          throw DivergenceError("table without tail majorant (no tail and no finite support)");
                        },
                    },
                    form_);
}

std::optional<Majorant> SequenceSpec::tail_majorant_fn() const {
  return std::visit(overloaded{
                        [](const seq::Geometric& s) -> std::optional<Majorant> {
                          const double r = std::abs(s.rho);
                          if (s.c == 0.0 || r == 0.0) return Majorant();
                          if (r >= 1.0) return std::nullopt;
                          return Majorant::term(std::abs(s.c) / (1.0 - r), 0.0, r);
                        },
                        [](const seq::Power& s) -> std::optional<Majorant> {
                          if (s.c == 0.0) return Majorant();
                          if (s.alpha >= -1.0) return std::nullopt;
                          return Majorant::term(std::abs(s.c), s.alpha, 1.0).tail_sum_fn();
                        },
                        [](const seq::Alternating& s) -> std::optional<Majorant> {
                          if (s.c != 0.0) return std::nullopt;
                          return Majorant();
                        },
                        // 1/(2(2n-1)) <= 1/(2n)
                        [](const seq::OddProductReciprocal& s) -> std::optional<Majorant> {
                          return Majorant::term(std::abs(s.c) / 2.0, -1.0, 1.0);
                        },
                        [](const seq::RisingFourReciprocal& s) -> std::optional<Majorant> {
                          return Majorant::term(std::abs(s.c) / 3.0, -3.0, 1.0);
                        },
                        [](const seq::AffineGeometric& s) -> std::optional<Majorant> {
                          if (s.offset != 0.0) return std::nullopt;
                          return SequenceSpec(seq::Geometric{s.c, s.rho}).tail_majorant_fn();
                        },
                        [](const seq::Constant& s) -> std::optional<Majorant> {
                          if (s.c != 0.0) return std::nullopt;
                          return Majorant();
                        },
                        [](const seq::Table& s) -> std::optional<Majorant> {
                          if (s.tail) {
                            auto m = s.tail->tail_majorant_fn();
                            if (!m) return std::nullopt;
                            return m->starting_at(s.end() + 1);
                          }
                          if (s.finite_support) return Majorant({}, s.end() + 1);
                          return std::nullopt;
                        },
                    },
                    form_);
}

Majorant SequenceSpec::inv_abs_majorant() const {
  auto vanishes = [](const std::string& why) -> Majorant { throw PreconditionError("reciprocal unbounded: " + why); };
  return std::visit(
      overloaded{
          [&](const seq::Geometric& s) -> Majorant {
            if (s.c == 0.0 || s.rho == 0.0) return vanishes("geometric sequence with zero terms");
            return Majorant::term(1.0 / std::abs(s.c), 0.0, 1.0 / std::abs(s.rho));
          },
          [&](const seq::Power& s) -> Majorant {
            if (s.c == 0.0) return vanishes("zero power sequence");
            return Majorant::term(1.0 / std::abs(s.c), -s.alpha, 1.0);
          },
          [&](const seq::Alternating& s) -> Majorant {
            if (s.c == 0.0) return vanishes("zero alternating sequence");
            return Majorant::constant(1.0 / std::abs(s.c));
          },
          // (2n-1)(2n+1) <= 4 n^2
          [&](const seq::OddProductReciprocal& s) -> Majorant {
            if (s.c == 0.0) return vanishes("zero sequence");
            return Majorant::term(4.0 / std::abs(s.c), 2.0, 1.0);
          },
          // n(n+1)(n+2)(n+3) <= 24 n^4
          [&](const seq::RisingFourReciprocal& s) -> Majorant {
            if (s.c == 0.0) return vanishes("zero sequence");
            return Majorant::term(24.0 / std::abs(s.c), 4.0, 1.0);
          },
          [&](const seq::AffineGeometric& s) -> Majorant {
            const double o = std::abs(s.offset), c = std::abs(s.c), r = std::abs(s.rho);
            if (c == 0.0 || r == 0.0) {
              if (o == 0.0) return vanishes("zero sequence");
              return Majorant::constant(1.0 / o);
            }
            if (o == 0.0) return Majorant::term(1.0 / c, 0.0, 1.0 / r);
            if (r == 1.0) {
              double lo = std::abs(s.offset + s.c * s.rho);
              if (s.rho < 0.0) lo = std::min(lo, std::abs(s.offset + s.c));
              if (lo == 0.0) return vanishes("affine-geometric sequence hits zero");
              return Majorant::constant(1.0 / lo);
            }
            if (r < 1.0) {
              // |o + c rho^n| >= |o|/2 once |c| r^n <= |o|/2
              Index from = std::max<Index>(1, static_cast<Index>(std::ceil(std::log(o / (2.0 * c)) / std::log(r))));
              while (c * dpow(r, from) > 0.5 * o) ++from;
              return Majorant::constant(2.0 / o, from);
            }
            Index from = std::max<Index>(1, static_cast<Index>(std::ceil(std::log(2.0 * o / c) / std::log(r))));
            while (c * dpow(r, from) < 2.0 * o) ++from;
            return Majorant::term(2.0 / c, 0.0, 1.0 / r, from);
          },
          [&](const seq::Constant& s) -> Majorant {
            if (s.c == 0.0) return vanishes("zero constant");
            return Majorant::constant(1.0 / std::abs(s.c));
          },
          [&](const seq::Table& s) -> Majorant {
            if (!s.tail) return vanishes("table without closed-form continuation");
            return s.tail->inv_abs_majorant().starting_at(s.end() + 1);
          },
      },
      form_);
}

Summability SequenceSpec::inv_summability() const {
  return std::visit(overloaded{
                        [](const seq::Geometric& s) {
                          return std::abs(s.rho) > 1.0 ? Summability::summable : Summability::divergent;
                        },
                        [](const seq::Power& s) { return s.alpha > 1.0 ? Summability::summable : Summability::divergent; },
                        [](const seq::Alternating&) { return Summability::divergent; },
                        [](const seq::OddProductReciprocal&) { return Summability::divergent; },
                        [](const seq::RisingFourReciprocal&) { return Summability::divergent; },
                        [](const seq::AffineGeometric& s) {
                          return std::abs(s.rho) > 1.0 && s.c != 0.0 ? Summability::summable : Summability::divergent;
                        },
                        [](const seq::Constant&) { return Summability::divergent; },
                        [](const seq::Table& s) { return s.tail ? s.tail->inv_summability() : Summability::unknown; },
                    },
                    form_);
}

std::optional<bool> SequenceSpec::nonvanishing() const {
  return std::visit(
      overloaded{
          [](const seq::Geometric& s) -> std::optional<bool> { return s.c != 0.0 && s.rho != 0.0; },
          [](const seq::Power& s) -> std::optional<bool> { return s.c != 0.0; },
          [](const seq::Alternating& s) -> std::optional<bool> { return s.c != 0.0; },
          [](const seq::OddProductReciprocal& s) -> std::optional<bool> { return s.c != 0.0; },
          [](const seq::RisingFourReciprocal& s) -> std::optional<bool> { return s.c != 0.0; },
          [](const seq::AffineGeometric& s) -> std::optional<bool> {
            if (s.c == 0.0 || s.rho == 0.0) return s.offset != 0.0;
            if (s.offset == 0.0) return true;
            auto hits_zero = [&](Index n) {
              if (n < 1) return false;
              const double g = s.c * dpow(s.rho, n);
              return std::abs(s.offset + g) <= 1e-14 * std::max(std::abs(s.offset), std::abs(g));
            };
            if (std::abs(s.rho) == 1.0) return !(hits_zero(1) || hits_zero(2));
            const double ratio = std::abs(s.offset / s.c);
            const double guess = std::log(ratio) / std::log(std::abs(s.rho));
            if (!std::isfinite(guess)) return true;
            const Index g0 = static_cast<Index>(std::floor(guess));
            for (Index n = g0 - 1; n <= g0 + 2; ++n)
              if (hits_zero(n)) return false;
            return true;
          },
          [](const seq::Constant& s) -> std::optional<bool> { return s.c != 0.0; },
          [](const seq::Table& s) -> std::optional<bool> {
            if (std::any_of(s.values.begin(), s.values.end(), [](double v) { return v == 0.0; })) return false;
            if (s.tail) return s.tail->nonvanishing();
            if (s.finite_support) return false;
            return std::nullopt;
          },
      },
      form_);
}

ValueRange SequenceSpec::range(Index from) const {
  from = std::max<Index>(1, from);
  return std::visit(overloaded{
                        [&](const seq::Geometric& s) { return geometric_range(s.c, s.rho, from); },
                        [&](const seq::Power& s) -> ValueRange {
                          if (s.c == 0.0 || s.alpha == 0.0) return point_range(s.c);
                          const double first = eval(from);
                          if (s.alpha < 0.0) return decaying_range(first);
                          return s.c > 0.0 ? ValueRange{first, kInf, true, false, std::nullopt, true}
                                           : ValueRange{-kInf, first, false, true, std::nullopt, true};
                        },
                        [&](const seq::Alternating& s) -> ValueRange {
                          if (s.c == 0.0) return point_range(0.0);
                          return ValueRange{-std::abs(s.c), std::abs(s.c), true, true, std::nullopt, true};
                        },
                        [&](const seq::OddProductReciprocal&) { return decaying_range(eval(from)); },
                        [&](const seq::RisingFourReciprocal&) { return decaying_range(eval(from)); },
                        [&](const seq::AffineGeometric& s) {
                          ValueRange g = geometric_range(s.c, s.rho, from);
                          g.inf += s.offset;
                          g.sup += s.offset;
                          if (g.limit) *g.limit += s.offset;
                          return g;
                        },
                        [&](const seq::Constant& s) { return point_range(s.c); },
                        [&](const seq::Table& s) -> ValueRange {
                          std::optional<ValueRange> out;
                          for (Index t = std::max(from, s.start); t <= s.end(); ++t) {
                            const double v = s.values[static_cast<std::size_t>(t - s.start)];
                            out = out ? merge(*out, point_range(v)) : point_range(v);
                          }
                          ValueRange cont;
                          const Index next = std::max(from, s.end() + 1);
                          if (s.tail) {
                            cont = s.tail->range(next);
                          } else if (s.finite_support) {
                            cont = point_range(0.0);
                          } else {
                            cont = ValueRange{-kInf, kInf, false, false, std::nullopt, false};
                          }
                          if (!out) return cont;
                          ValueRange merged = merge(*out, cont);
                          merged.limit = cont.limit;
                          return merged;
                        },
                    },
                    form_);
}

// ---------------------------------------------------------------------------

FunctionSpec::FunctionSpec(FunctionForm form) : form_(std::move(form)) {
  std::visit(overloaded{
                 [](const fn::Linear&) {},
                 [](const fn::SinePower& s) {
                   if (s.power < 1) throw ValidationError("f.power", "sine-power needs an integer power >= 1");
                 },
                 [](const fn::Polynomial& s) {
                   if (s.coeffs.empty()) throw ValidationError("f.coeffs", "polynomial needs at least one coefficient");
                 },
                 [](const fn::Table& s) {
                   if (s.xs.empty() || s.xs.size() != s.ys.size())
                     throw ValidationError("f", "table needs matching, nonempty x and y arrays");
                   for (std::size_t i = 1; i < s.xs.size(); ++i)
                     if (!(s.xs[i] > s.xs[i - 1])) throw ValidationError("f.x", "table abscissae must increase strictly");
                 },
             },
             form_);
}

std::string FunctionSpec::kind() const {
  return std::visit(overloaded{
                        [](const fn::Linear&) -> std::string { return "linear"; },
                        [](const fn::SinePower&) -> std::string { return "sine-power"; },
                        [](const fn::Polynomial&) -> std::string { return "polynomial"; },
                        [](const fn::Table&) -> std::string { return "table"; },
                    },
                    form_);
}

double FunctionSpec::eval(double x) const {
  return std::visit(overloaded{
                        [&](const fn::Linear& s) { return s.slope * x + s.intercept; },
                        [&](const fn::SinePower& s) { return s.amplitude * std::pow(std::sin(s.frequency * x), s.power); },
                        [&](const fn::Polynomial& s) {
                          double acc = 0.0;
                          for (auto it = s.coeffs.rbegin(); it != s.coeffs.rend(); ++it) acc = acc * x + *it;
                          return acc;
                        },
                        [&](const fn::Table& s) {
                          if (x <= s.xs.front()) return s.ys.front();
                          if (x >= s.xs.back()) return s.ys.back();
                          auto it = std::upper_bound(s.xs.begin(), s.xs.end(), x);
                          const std::size_t i = static_cast<std::size_t>(it - s.xs.begin());
                          const double t = (x - s.xs[i - 1]) / (s.xs[i] - s.xs[i - 1]);
                          return s.ys[i - 1] + t * (s.ys[i] - s.ys[i - 1]);
                        },
                    },
                    form_);
}

std::optional<double> FunctionSpec::global_bound() const {
  return std::visit(overloaded{
                        [](const fn::Linear& s) -> std::optional<double> {
                          if (s.slope != 0.0) return std::nullopt;
                          return std::abs(s.intercept);
                        },
                        [](const fn::SinePower& s) -> std::optional<double> { return std::abs(s.amplitude); },
                        [](const fn::Polynomial& s) -> std::optional<double> {
                          for (std::size_t i = 1; i < s.coeffs.size(); ++i)
                            if (s.coeffs[i] != 0.0) return std::nullopt;
                          return std::abs(s.coeffs.front());
                        },
                        [](const fn::Table& s) -> std::optional<double> {
                          double m = 0.0;
                          for (double y : s.ys) m = std::max(m, std::abs(y));
                          return m;
                        },
                    },
                    form_);
}

std::optional<double> FunctionSpec::local_bound(double M) const {
  return std::visit(overloaded{
                        [&](const fn::Linear& s) -> std::optional<double> {
                          return std::abs(s.slope) * M + std::abs(s.intercept);
                        },
                        [&](const fn::SinePower& s) -> std::optional<double> {
                          const double u = std::min(std::abs(s.frequency) * M, std::numbers::pi / 2.0);
                          return std::abs(s.amplitude) * std::pow(std::sin(u), s.power);
                        },
                        // polynomials go through the grid estimate
                        [&](const fn::Polynomial&) -> std::optional<double> { return std::nullopt; },
                        [&](const fn::Table& s) -> std::optional<double> {
                          double m = std::max(std::abs(eval(-M)), std::abs(eval(M)));
                          for (std::size_t i = 0; i < s.xs.size(); ++i)
                            if (std::abs(s.xs[i]) <= M) m = std::max(m, std::abs(s.ys[i]));
                          return m;
                        },
                    },
                    form_);
}

std::optional<double> FunctionSpec::lipschitz(double M) const {
  return std::visit(overloaded{
                        [&](const fn::Linear& s) -> std::optional<double> { return std::abs(s.slope); },
                        [&](const fn::SinePower& s) -> std::optional<double> {
                          const double k = std::abs(s.amplitude * s.frequency) * s.power;
                          if (s.power == 1) return k;
                          // |sin^{p-1} u cos u| increases on [0, atan(sqrt(p-1))]
                          const double peak = std::atan(std::sqrt(static_cast<double>(s.power - 1)));
                          const double u = std::min(std::abs(s.frequency) * M, peak);
                          return k * std::pow(std::sin(u), s.power - 1) * std::cos(u);
                        },
                        [&](const fn::Polynomial&) -> std::optional<double> { return std::nullopt; },
                        [&](const fn::Table& s) -> std::optional<double> {
                          double m = 0.0;
                          for (std::size_t i = 1; i < s.xs.size(); ++i) {
                            if (s.xs[i] < -M || s.xs[i - 1] > M) continue;
                            m = std::max(m, std::abs((s.ys[i] - s.ys[i - 1]) / (s.xs[i] - s.xs[i - 1])));
                          }
                          return m;
                        },
                    },
                    form_);
}

FMeta estimate_f_meta(const FunctionSpec& f, double M) {
  if (!(M > 0.0)) throw PreconditionError("estimate_f_meta needs M > 0");
  auto Q = f.local_bound(M);
  auto L = f.lipschitz(M);
  if (Q && L) return FMeta{*Q, *L, true};
  constexpr int kSteps = 20000;  // step M / 1e4 on [-M, M]
  const double h = 2.0 * M / kSteps;
  double q_est = 0.0, l_est = 0.0;
  double prev = f.eval(-M);
  q_est = std::abs(prev);
  for (int i = 1; i <= kSteps; ++i) {
    const double x = -M + h * i;
    const double v = f.eval(x);
    q_est = std::max(q_est, std::abs(v));
    l_est = std::max(l_est, std::abs(v - prev) / h);
    prev = v;
  }
  return FMeta{Q ? *Q : 1.1 * q_est, L ? *L : 1.1 * l_est, false};
}

// ---------------------------------------------------------------------------

namespace {

void validate_sequence(const SequenceSpec& s, const std::string& path) {
  if (const auto* t = std::get_if<seq::Table>(&s.form())) {
    if (t->values.empty()) throw ValidationError(path + ".values", "table needs at least one value");
    if (t->start != 1) throw ValidationError(path + ".start", "tables inside a problem must start at index 1");
    if (!t->tail && !t->finite_support)
      throw ValidationError(path, "table without tail majorant (give 'tail' or 'finite_support')");
    if (t->tail) validate_sequence(*t->tail, path + ".tail");
  }
  for (double v : {s.eval(1), s.eval(2)})
    if (!std::isfinite(v)) throw ValidationError(path, "sequence evaluates to a non-finite value");
}

}  // namespace

ProblemSpec::ProblemSpec(Index tau, Index sigma, SequenceSpec r, SequenceSpec a, SequenceSpec b, SequenceSpec q,
                         FunctionSpec f)
    : tau_(tau), sigma_(sigma), r_(std::move(r)), a_(std::move(a)), b_(std::move(b)), q_(std::move(q)), f_(std::move(f)) {
  if (tau_ < 0) throw ValidationError("tau", "delay tau must be nonnegative");
  validate_sequence(r_, "r");
  validate_sequence(a_, "a");
  validate_sequence(b_, "b");
  validate_sequence(q_, "q");
  auto nv = r_.nonvanishing();
  if (!nv.has_value()) throw ValidationError("r", "cannot certify that r never vanishes");
  if (!*nv) throw ValidationError("r", "r must not vanish");
  try {
    (void)r_.inv_abs_majorant();
  } catch (const PreconditionError& e) {
    throw ValidationError("r", e.what());
  }
}

}  // namespace qdiff
