#include "fcav/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace fcav {

namespace {
bool term_less(const Poly3::Term& a, const Poly3::Term& b) {
  if (a.ex != b.ex) return a.ex < b.ex;
  if (a.ey != b.ey) return a.ey < b.ey;
  return a.ez < b.ez;
}
} // namespace

void Poly3::normalize() {
  std::sort(terms_.begin(), terms_.end(), term_less);
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const Term& t : terms_) {
    if (!merged.empty() && merged.back().ex == t.ex && merged.back().ey == t.ey &&
        merged.back().ez == t.ez) {
      merged.back().c += t.c;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.c == 0.0; });
  terms_ = std::move(merged);
}

Poly3 Poly3::from_terms(std::vector<Term> terms) {
  Poly3 p;
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

Poly3 Poly3::constant(double c) { return from_terms({{0, 0, 0, c}}); }

Poly3 Poly3::monomial(int ex, int ey, int ez, double c) {
  return from_terms({{ex, ey, ez, c}});
}

Poly3 Poly3::variable(int axis) {
  return monomial(axis == 0, axis == 1, axis == 2, 1.0);
}

Poly3 Poly3::operator+(const Poly3& o) const {
  std::vector<Term> t = terms_;
  t.insert(t.end(), o.terms_.begin(), o.terms_.end());
  return from_terms(std::move(t));
}

Poly3 Poly3::operator-(const Poly3& o) const { return *this + o * -1.0; }

Poly3 Poly3::operator*(const Poly3& o) const {
  std::vector<Term> t;
  t.reserve(terms_.size() * o.terms_.size());
  for (const Term& a : terms_)
    for (const Term& b : o.terms_)
      t.push_back({a.ex + b.ex, a.ey + b.ey, a.ez + b.ez, a.c * b.c});
  return from_terms(std::move(t));
}

Poly3 Poly3::operator*(double s) const {
  std::vector<Term> t = terms_;
  for (Term& a : t) a.c *= s;
  return from_terms(std::move(t));
}

Poly3 Poly3::diff(int axis) const {
  std::vector<Term> t;
  t.reserve(terms_.size());
  for (const Term& a : terms_) {
    Term d = a;
    int* e = axis == 0 ? &d.ex : axis == 1 ? &d.ey : &d.ez;
    if (*e == 0) continue;
    d.c *= *e;
    *e -= 1;
    t.push_back(d);
  }
  return from_terms(std::move(t));
}

namespace {
constexpr int kMaxPow = 64;

inline void pow_table(double v, int dmax, double* tab) {
  tab[0] = 1.0;
  for (int i = 1; i <= dmax; ++i) tab[i] = tab[i - 1] * v;
}
} // namespace

double Poly3::eval(const Vec3& p) const {
  if (terms_.empty()) return 0.0;
  int d = degree();
  double px[kMaxPow], py[kMaxPow], pz[kMaxPow];
  pow_table(p.x(), d, px);
  pow_table(p.y(), d, py);
  pow_table(p.z(), d, pz);
  double s = 0.0;
  for (const Term& t : terms_) s += t.c * px[t.ex] * py[t.ey] * pz[t.ez];
  return s;
}

Vec3 Poly3::grad_eval(const Vec3& p) const {
  if (terms_.empty()) return Vec3::Zero();
  int d = degree();
  double px[kMaxPow], py[kMaxPow], pz[kMaxPow];
  pow_table(p.x(), d, px);
  pow_table(p.y(), d, py);
  pow_table(p.z(), d, pz);
  Vec3 g = Vec3::Zero();
  for (const Term& t : terms_) {
    if (t.ex > 0) g.x() += t.c * t.ex * px[t.ex - 1] * py[t.ey] * pz[t.ez];
    if (t.ey > 0) g.y() += t.c * t.ey * px[t.ex] * py[t.ey - 1] * pz[t.ez];
    if (t.ez > 0) g.z() += t.c * t.ez * px[t.ex] * py[t.ey] * pz[t.ez - 1];
  }
  return g;
}

int Poly3::degree() const {
  int d = -1;
  for (const Term& t : terms_) d = std::max(d, t.ex + t.ey + t.ez);
  return d;
}

VPoly3 gradient(const Poly3& p) {
  return VPoly3{{p.diff(0), p.diff(1), p.diff(2)}};
}

VPoly3 curl(const VPoly3& v) {
  return VPoly3{{v.comp[2].diff(1) - v.comp[1].diff(2),
                 v.comp[0].diff(2) - v.comp[2].diff(0),
                 v.comp[1].diff(0) - v.comp[0].diff(1)}};
}

Poly3 x_dot_grad(const Poly3& p) {
  return Poly3::variable(0) * p.diff(0) + Poly3::variable(1) * p.diff(1) +
         Poly3::variable(2) * p.diff(2);
}

Poly3 laplacian(const Poly3& p) {
  return p.diff(0).diff(0) + p.diff(1).diff(1) + p.diff(2).diff(2);
}

} // namespace fcav
