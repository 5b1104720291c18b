#include "qdiff/majorant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qdiff {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ratio bound of consecutive terms s^p b^s for s >= n, p > 0.
double ratio_bound(double power, double base, Index n) {
  return std::pow(1.0 + 1.0 / static_cast<double>(n), power) * base;
}

// First index >= from where the consecutive-term ratio drops to sqrt(base).
Index geometric_regime_start(double power, double base, Index from) {
  double target = std::expm1(-0.5 * std::log(base) / power);
  Index n = std::max<Index>(from, static_cast<Index>(std::ceil(1.0 / target)));
  while (ratio_bound(power, base, n) >= 1.0) ++n;
  return n;
}

double term_tail(const MajorantTerm& t, Index n) {
  if (t.coef == 0.0) return 0.0;
  const double nd = static_cast<double>(n);
  if (t.base < 1.0) {
    if (t.power <= 0.0) return t.eval(n) / (1.0 - t.base);
    Index start = geometric_regime_start(t.power, t.base, n);
    double explicit_part = 0.0;
    for (Index s = n; s < start; ++s) explicit_part += t.eval(s);
    return explicit_part + t.eval(start) / (1.0 - ratio_bound(t.power, t.base, start));
  }
  if (t.base == 1.0 && t.power < -1.0) {
    return t.coef * (std::pow(nd, t.power) + std::pow(nd, t.power + 1.0) / (-t.power - 1.0));
  }
  return kInf;
}

void push_term(std::vector<MajorantTerm>& out, MajorantTerm t) {
  if (t.coef == 0.0 || t.base == 0.0) return;
  // products like (1/rho) * rho must classify as base 1, never as slightly below it
  if (std::abs(t.base - 1.0) <= 64.0 * std::numeric_limits<double>::epsilon()) t.base = 1.0;
  if (!(t.coef > 0.0) || !(t.base > 0.0)) throw std::invalid_argument("Majorant terms need coef >= 0 and base > 0");
  out.push_back(t);
}

}  // namespace

double MajorantTerm::eval(Index s) const {
  if (coef == 0.0) return 0.0;
  const double sd = static_cast<double>(s);
  double geo = base == 1.0 ? 1.0 : std::pow(base, sd);
  if (geo == 0.0) return 0.0;
  double poly = power == 0.0 ? 1.0 : std::pow(sd, power);
  return coef * poly * geo;
}

bool MajorantTerm::summable() const {
  if (coef == 0.0) return true;
  if (base < 1.0) return true;
  return base == 1.0 && power < -1.0;
}

Majorant::Majorant(std::vector<MajorantTerm> terms, Index valid_from) : valid_from_(std::max<Index>(1, valid_from)) {
  for (const auto& t : terms) push_term(terms_, t);
}

Majorant Majorant::term(double coef, double power, double base, Index valid_from) {
  return Majorant({MajorantTerm{coef, power, base}}, valid_from);
}

double Majorant::eval(Index s) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t.eval(s);
  return sum;
}

bool Majorant::summable() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const MajorantTerm& t) { return t.summable(); });
}

double Majorant::tail_sum(Index n) const {
  if (n < 1) throw std::invalid_argument("Majorant::tail_sum needs n >= 1");
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = term_tail(t, n);
    if (std::isinf(v)) return kInf;
    sum += v;
  }
  return sum;
}

std::optional<Majorant> Majorant::tail_sum_fn() const {
  std::vector<MajorantTerm> out;
  Index from = valid_from_;
  for (const auto& t : terms_) {
    if (!t.summable()) return std::nullopt;
    if (t.base < 1.0) {
      if (t.power <= 0.0) {
        push_term(out, {t.coef / (1.0 - t.base), t.power, t.base});
      } else {
        Index start = geometric_regime_start(t.power, t.base, valid_from_);
        from = std::max(from, start);
        push_term(out, {t.coef / (1.0 - ratio_bound(t.power, t.base, start)), t.power, t.base});
      }
    } else {
      // base == 1, power < -1: sum_{s>=n} s^p <= n^p + n^{p+1}/(-p-1)
      push_term(out, {t.coef, t.power, 1.0});
      push_term(out, {t.coef / (-t.power - 1.0), t.power + 1.0, 1.0});
    }
  }
  return Majorant(std::move(out), from);
}

Majorant Majorant::partial_sum_fn() const {
  std::vector<MajorantTerm> out;
  for (const auto& t : terms_) {
    if (t.base < 1.0) {
      push_term(out, {term_tail(t, 1), 0.0, 1.0});
    } else if (t.base == 1.0) {
      if (t.power >= 0.0) {
        push_term(out, {t.coef / (t.power + 1.0), t.power + 1.0, 1.0});
      } else if (t.power > -1.0) {
        push_term(out, {t.coef, 0.0, 1.0});
        push_term(out, {t.coef / (t.power + 1.0), t.power + 1.0, 1.0});
      } else if (t.power == -1.0) {
        // 1 + ln s <= 1 + (4/e) s^{1/4}
        push_term(out, {t.coef, 0.0, 1.0});
        push_term(out, {t.coef * 4.0 / std::exp(1.0), 0.25, 1.0});
      } else {
        push_term(out, {t.coef * (1.0 + 1.0 / (-t.power - 1.0)), 0.0, 1.0});
      }
    } else {
      push_term(out, {t.coef / (t.base - 1.0), std::max(t.power, 0.0), t.base});
    }
  }
  return Majorant(std::move(out), valid_from_);
}

Majorant Majorant::pow(double p) const {
  if (p < 1.0) throw std::invalid_argument("Majorant::pow needs p >= 1");
  const double k = static_cast<double>(terms_.size());
  const double factor = terms_.size() > 1 ? std::pow(k, p - 1.0) : 1.0;
  std::vector<MajorantTerm> out;
  for (const auto& t : terms_) push_term(out, {factor * std::pow(t.coef, p), t.power * p, std::pow(t.base, p)});
  return Majorant(std::move(out), valid_from_);
}

Majorant Majorant::scaled(double k) const {
  if (k < 0.0) throw std::invalid_argument("Majorant::scaled needs k >= 0");
  std::vector<MajorantTerm> out;
  for (const auto& t : terms_) push_term(out, {t.coef * k, t.power, t.base});
  return Majorant(std::move(out), valid_from_);
}

Majorant Majorant::starting_at(Index n) const { return Majorant(terms_, std::max(valid_from_, n)); }

Majorant operator+(const Majorant& lhs, const Majorant& rhs) {
  std::vector<MajorantTerm> out = lhs.terms_;
  out.insert(out.end(), rhs.terms_.begin(), rhs.terms_.end());
  return Majorant(std::move(out), std::max(lhs.valid_from_, rhs.valid_from_));
}

Majorant operator*(const Majorant& lhs, const Majorant& rhs) {
  std::vector<MajorantTerm> out;
  for (const auto& u : lhs.terms_)
    for (const auto& v : rhs.terms_) push_term(out, {u.coef * v.coef, u.power + v.power, u.base * v.base});
  return Majorant(std::move(out), std::max(lhs.valid_from_, rhs.valid_from_));
}

}  // namespace qdiff
