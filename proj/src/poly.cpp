#include "wittlab/field.hpp"

namespace wittlab::detail {

int deg(const Poly& a) { return static_cast<int>(a.c.size()) - 1; }

bool p_is_zero(const Poly& a) { return a.c.empty(); }

void norm(Poly& a, const FieldPtr& f) {
  while (!a.c.empty() && v_is_zero(f, a.c.back())) a.c.pop_back();
}

Poly p_const(const Value& v, const FieldPtr& f) {
  Poly r;
  if (!v_is_zero(f, v)) r.c.push_back(v);
  return r;
}

Poly p_add(const FieldPtr& f, const Poly& a, const Poly& b) {
  Poly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), v_zero(f));
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    if (i < a.c.size() && i < b.c.size())
      r.c[i] = v_add(f, a.c[i], b.c[i]);
    else if (i < a.c.size())
      r.c[i] = a.c[i];
    else
      r.c[i] = b.c[i];
  }
  norm(r, f);
  return r;
}

Poly p_neg(const FieldPtr& f, const Poly& a) {
  Poly r = a;
  for (auto& x : r.c) x = v_neg(f, x);
  return r;
}

Poly p_sub(const FieldPtr& f, const Poly& a, const Poly& b) { return p_add(f, a, p_neg(f, b)); }

Poly p_mul(const FieldPtr& f, const Poly& a, const Poly& b) {
  Poly r;
  if (a.c.empty() || b.c.empty()) return r;
  r.c.resize(a.c.size() + b.c.size() - 1, v_zero(f));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = v_add(f, r.c[i + j], v_mul(f, a.c[i], b.c[j]));
  norm(r, f);
  return r;
}

Poly p_mul_val(const FieldPtr& f, const Poly& a, const Value& s) {
  if (v_is_zero(f, s)) return {};
  Poly r = a;
  for (auto& x : r.c) x = v_mul(f, x, s);
  norm(r, f);
  return r;
}

std::pair<Poly, Poly> p_divrem(const FieldPtr& f, const Poly& a, const Poly& b) {
  if (p_is_zero(b)) throw division_by_zero();
  Poly q, r = a;
  int db = deg(b);
  Value lcinv = v_inv(f, b.c.back());
  while (deg(r) >= db) {
    int shift = deg(r) - db;
    Value coef = v_mul(f, r.c.back(), lcinv);
    if (static_cast<int>(q.c.size()) < shift + 1) q.c.resize(shift + 1, v_zero(f));
    q.c[shift] = v_add(f, q.c[shift], coef);
    for (int i = 0; i <= db; ++i)
      r.c[shift + i] = v_sub(f, r.c[shift + i], v_mul(f, coef, b.c[i]));
    norm(r, f);
  }
  norm(q, f);
  return {q, r};
}

Poly p_monic(const FieldPtr& f, const Poly& a) {
  if (p_is_zero(a)) return a;
  return p_mul_val(f, a, v_inv(f, a.c.back()));
}

Poly p_gcd(const FieldPtr& f, Poly a, Poly b) {
  while (!p_is_zero(b)) {
    Poly r = p_divrem(f, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return p_monic(f, a);
}

Poly p_derivative(const FieldPtr& f, const Poly& a) {
  Poly r;
  if (a.c.size() <= 1) return r;
  r.c.resize(a.c.size() - 1);
  for (std::size_t i = 1; i < a.c.size(); ++i)
    r.c[i - 1] = v_mul(f, a.c[i], v_from_int(f, static_cast<long>(i)));
  norm(r, f);
  return r;
}

Value p_eval(const FieldPtr& f, const Poly& a, const Value& at) {
  Value acc = v_zero(f);
  for (auto it = a.c.rbegin(); it != a.c.rend(); ++it) acc = v_add(f, v_mul(f, acc, at), *it);
  return acc;
}

int p_trailing_deg(const FieldPtr& f, const Poly& a) {
  for (std::size_t i = 0; i < a.c.size(); ++i)
    if (!v_is_zero(f, a.c[i])) return static_cast<int>(i);
  return -1;
}

namespace {

// p-th root of a polynomial that is an exact p-th power (char p).
Poly p_pth_root(const FieldPtr& f, const Poly& a, long p) {
  Poly r;
  if (p_is_zero(a)) return r;
  if (deg(a) % p != 0) throw unsupported_tower("p-th root of a polynomial of bad degree");
  r.c.resize(deg(a) / p + 1, v_zero(f));
  for (int i = 0; i <= deg(a); ++i) {
    if (i % p == 0) {
      r.c[i / p] = v_pth_root(f, a.c[i]);
    } else if (!v_is_zero(f, a.c[i])) {
      throw unsupported_tower("polynomial is not a p-th power");
    }
  }
  return r;
}

void sqf_merge(std::vector<std::pair<Poly, int>>& out, const Poly& g, int m) {
  if (deg(g) > 0) out.emplace_back(g, m);
}

// Square-free decomposition, valid in characteristic 0 and p (Geddes et al.).
void sqf_rec(const FieldPtr& f, const Poly& a, int outer_mult, std::vector<std::pair<Poly, int>>& out) {
  long p = f ? f->characteristic() : 0;
  Poly fp = p_derivative(f, a);
  if (p_is_zero(fp)) {
    if (p == 0) return;  // constant
    sqf_rec(f, p_pth_root(f, a, p), outer_mult * static_cast<int>(p), out);
    return;
  }
  Poly c = p_gcd(f, a, fp);
  Poly w = p_divrem(f, a, c).first;
  int i = 1;
  while (deg(w) > 0) {
    Poly y = p_gcd(f, w, c);
    Poly z = p_divrem(f, w, y).first;
    sqf_merge(out, z, i * outer_mult);
    w = std::move(y);
    c = p_divrem(f, c, w).first;
    ++i;
  }
  if (deg(c) > 0) {
    if (p == 0) throw unsupported_tower("square-free decomposition failed");
    sqf_rec(f, p_pth_root(f, c, p), outer_mult * static_cast<int>(p), out);
  }
}

}  // namespace

std::vector<std::pair<Poly, int>> p_squarefree(const FieldPtr& f, const Poly& a) {
  std::vector<std::pair<Poly, int>> out;
  if (deg(a) <= 0) return out;
  sqf_rec(f, p_monic(f, a), 1, out);
  return out;
}

Value ratval(const FieldPtr& base, Poly num, Poly den) {
  if (p_is_zero(den)) throw division_by_zero();
  if (p_is_zero(num)) {
    Poly one;
    one.c.push_back(v_one(base));
    return Value{std::make_shared<const RatVal>(RatVal{{}, std::move(one)})};
  }
  Poly g = p_gcd(base, num, den);
  if (deg(g) > 0) {
    num = p_divrem(base, num, g).first;
    den = p_divrem(base, den, g).first;
  }
  Value lcinv = v_inv(base, den.c.back());
  num = p_mul_val(base, num, lcinv);
  den = p_mul_val(base, den, lcinv);
  return Value{std::make_shared<const RatVal>(RatVal{std::move(num), std::move(den)})};
}

}  // namespace wittlab::detail
