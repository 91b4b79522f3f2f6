#include "wittlab/field.hpp"

#include <sstream>

namespace wittlab {

using namespace detail;

namespace detail {

long fp_pow(long a, long e, long p) {
  long r = 1 % p;
  a %= p;
  if (a < 0) a += p;
  while (e > 0) {
    if (e & 1) r = static_cast<long>((__int128)r * a % p);
    a = static_cast<long>((__int128)a * a % p);
    e >>= 1;
  }
  return r;
}

long fp_inv(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) throw division_by_zero();
  long t = 0, newt = 1, r = p, newr = a;
  while (newr != 0) {
    long q = r / newr;
    long tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (t < 0) t += p;
  return t;
}

bool fp_is_square(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return true;
  return fp_pow(a, (p - 1) / 2, p) == 1;
}

long fp_sqrt(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  // p stays small in practice; direct scan is exact and simple
  for (long x = 1; x < p; ++x)
    if ((__int128)x * x % p == a) return x;
  throw error("fp_sqrt: not a square");
}

namespace {

const RatVal& as_rat(const Value& a) { return *std::get<std::shared_ptr<const RatVal>>(a.v); }
const ExtVal& as_ext(const Value& a) { return *std::get<std::shared_ptr<const ExtVal>>(a.v); }

Value mk_rat(Poly num, Poly den) {
  return Value{std::make_shared<const RatVal>(RatVal{std::move(num), std::move(den)})};
}
Value mk_ext(Value re, Value im) {
  return Value{std::make_shared<const ExtVal>(ExtVal{std::move(re), std::move(im)})};
}

Poly poly_one(const FieldPtr& base) {
  Poly r;
  r.c.push_back(v_one(base));
  return r;
}

}  // namespace

Value v_zero(const FieldPtr& f) {
  switch (f->kind) {
    case Field::Kind::rationals: return Value{mpq_class(0)};
    case Field::Kind::finite: return Value{0L};
    case Field::Kind::ratfun: return mk_rat({}, poly_one(f->base));
    case Field::Kind::ext: return mk_ext(v_zero(f->base), v_zero(f->base));
  }
  throw error("unreachable");
}

Value v_one(const FieldPtr& f) {
  switch (f->kind) {
    case Field::Kind::rationals: return Value{mpq_class(1)};
    case Field::Kind::finite: return Value{1L % f->p};
    case Field::Kind::ratfun: return mk_rat(poly_one(f->base), poly_one(f->base));
    case Field::Kind::ext: return mk_ext(v_one(f->base), v_zero(f->base));
  }
  throw error("unreachable");
}

Value v_from_int(const FieldPtr& f, long n) {
  switch (f->kind) {
    case Field::Kind::rationals: return Value{mpq_class(n)};
    case Field::Kind::finite: {
      long r = n % f->p;
      if (r < 0) r += f->p;
      return Value{r};
    }
    case Field::Kind::ratfun: return mk_rat(p_const(v_from_int(f->base, n), f->base), poly_one(f->base));
    case Field::Kind::ext: return mk_ext(v_from_int(f->base, n), v_zero(f->base));
  }
  throw error("unreachable");
}

Value v_from_mpq(const FieldPtr& f, const mpq_class& q) {
  switch (f->kind) {
    case Field::Kind::rationals: {
      mpq_class c(q);
      c.canonicalize();
      return Value{c};
    }
    case Field::Kind::finite: {
      long num = mpz_fdiv_ui(q.get_num().get_mpz_t(), f->p);
      long den = mpz_fdiv_ui(q.get_den().get_mpz_t(), f->p);
      return Value{static_cast<long>((__int128)num * fp_inv(den, f->p) % f->p)};
    }
    case Field::Kind::ratfun: return mk_rat(p_const(v_from_mpq(f->base, q), f->base), poly_one(f->base));
    case Field::Kind::ext: return mk_ext(v_from_mpq(f->base, q), v_zero(f->base));
  }
  throw error("unreachable");
}

Value v_lift1(const FieldPtr& f, const Value& a) {
  switch (f->kind) {
    case Field::Kind::ratfun: return mk_rat(p_const(a, f->base), poly_one(f->base));
    case Field::Kind::ext: return mk_ext(a, v_zero(f->base));
    default: throw error("cannot lift into a prime layer");
  }
}

bool v_is_zero(const FieldPtr& f, const Value& a) {
  switch (f->kind) {
    case Field::Kind::rationals: return std::get<mpq_class>(a.v) == 0;
    case Field::Kind::finite: return std::get<long>(a.v) % f->p == 0;
    case Field::Kind::ratfun: return p_is_zero(as_rat(a).num);
    case Field::Kind::ext: {
      const auto& e = as_ext(a);
      return v_is_zero(f->base, e.re) && v_is_zero(f->base, e.im);
    }
  }
  throw error("unreachable");
}

bool v_eq(const FieldPtr& f, const Value& a, const Value& b) {
  switch (f->kind) {
    case Field::Kind::rationals: return std::get<mpq_class>(a.v) == std::get<mpq_class>(b.v);
    case Field::Kind::finite: return std::get<long>(a.v) == std::get<long>(b.v);
    case Field::Kind::ratfun: {
      const auto &x = as_rat(a), &y = as_rat(b);
      if (deg(x.num) != deg(y.num) || deg(x.den) != deg(y.den)) return false;
      for (std::size_t i = 0; i < x.num.c.size(); ++i)
        if (!v_eq(f->base, x.num.c[i], y.num.c[i])) return false;
      for (std::size_t i = 0; i < x.den.c.size(); ++i)
        if (!v_eq(f->base, x.den.c[i], y.den.c[i])) return false;
      return true;
    }
    case Field::Kind::ext: {
      const auto &x = as_ext(a), &y = as_ext(b);
      return v_eq(f->base, x.re, y.re) && v_eq(f->base, x.im, y.im);
    }
  }
  throw error("unreachable");
}

Value v_add(const FieldPtr& f, const Value& a, const Value& b) {
  switch (f->kind) {
    case Field::Kind::rationals: return Value{mpq_class(std::get<mpq_class>(a.v) + std::get<mpq_class>(b.v))};
    case Field::Kind::finite: return Value{(std::get<long>(a.v) + std::get<long>(b.v)) % f->p};
    case Field::Kind::ratfun: {
      const auto &x = as_rat(a), &y = as_rat(b);
      Poly num = p_add(f->base, p_mul(f->base, x.num, y.den), p_mul(f->base, y.num, x.den));
      Poly den = p_mul(f->base, x.den, y.den);
      return ratval(f->base, std::move(num), std::move(den));
    }
    case Field::Kind::ext: {
      const auto &x = as_ext(a), &y = as_ext(b);
      return mk_ext(v_add(f->base, x.re, y.re), v_add(f->base, x.im, y.im));
    }
  }
  throw error("unreachable");
}

Value v_neg(const FieldPtr& f, const Value& a) {
  switch (f->kind) {
    case Field::Kind::rationals: return Value{mpq_class(-std::get<mpq_class>(a.v))};
    case Field::Kind::finite: {
      long x = std::get<long>(a.v);
      return Value{x == 0 ? 0L : f->p - x};
    }
    case Field::Kind::ratfun: {
      const auto& x = as_rat(a);
      return mk_rat(p_neg(f->base, x.num), x.den);
    }
    case Field::Kind::ext: {
      const auto& x = as_ext(a);
      return mk_ext(v_neg(f->base, x.re), v_neg(f->base, x.im));
    }
  }
  throw error("unreachable");
}

Value v_sub(const FieldPtr& f, const Value& a, const Value& b) { return v_add(f, a, v_neg(f, b)); }

Value v_mul(const FieldPtr& f, const Value& a, const Value& b) {
  switch (f->kind) {
    case Field::Kind::rationals: return Value{mpq_class(std::get<mpq_class>(a.v) * std::get<mpq_class>(b.v))};
    case Field::Kind::finite:
      return Value{static_cast<long>((__int128)std::get<long>(a.v) * std::get<long>(b.v) % f->p)};
    case Field::Kind::ratfun: {
      const auto &x = as_rat(a), &y = as_rat(b);
      return ratval(f->base, p_mul(f->base, x.num, y.num), p_mul(f->base, x.den, y.den));
    }
    case Field::Kind::ext: {
      const auto &x = as_ext(a), &y = as_ext(b);
      // (r1 + i1 g)(r2 + i2 g) = r1 r2 + i1 i2 d + (r1 i2 + i1 r2) g
      Value re = v_add(f->base, v_mul(f->base, x.re, y.re),
                       v_mul(f->base, v_mul(f->base, x.im, y.im), f->ext_d));
      Value im = v_add(f->base, v_mul(f->base, x.re, y.im), v_mul(f->base, x.im, y.re));
      return mk_ext(std::move(re), std::move(im));
    }
  }
  throw error("unreachable");
}

Value v_inv(const FieldPtr& f, const Value& a) {
  if (v_is_zero(f, a)) throw division_by_zero();
  switch (f->kind) {
    case Field::Kind::rationals: return Value{mpq_class(1 / std::get<mpq_class>(a.v))};
    case Field::Kind::finite: return Value{fp_inv(std::get<long>(a.v), f->p)};
    case Field::Kind::ratfun: {
      const auto& x = as_rat(a);
      return ratval(f->base, x.den, x.num);
    }
    case Field::Kind::ext: {
      const auto& x = as_ext(a);
      // 1/(r + i g) = (r - i g)/(r^2 - i^2 d)
      Value n = v_sub(f->base, v_mul(f->base, x.re, x.re),
                      v_mul(f->base, v_mul(f->base, x.im, x.im), f->ext_d));
      if (v_is_zero(f->base, n))
        throw relation_violation("norm vanishes in quadratic extension (discriminant is a square)");
      Value ninv = v_inv(f->base, n);
      return mk_ext(v_mul(f->base, x.re, ninv), v_neg(f->base, v_mul(f->base, x.im, ninv)));
    }
  }
  throw error("unreachable");
}

Value v_div(const FieldPtr& f, const Value& a, const Value& b) { return v_mul(f, a, v_inv(f, b)); }

Value v_pow(const FieldPtr& f, const Value& a, long n) {
  if (n < 0) return v_pow(f, v_inv(f, a), -n);
  Value r = v_one(f), x = a;
  while (n > 0) {
    if (n & 1) r = v_mul(f, r, x);
    x = v_mul(f, x, x);
    n >>= 1;
  }
  return r;
}

Value v_pth_root(const FieldPtr& f, const Value& a) {
  long p = f->characteristic();
  if (p == 0) throw unsupported_tower("p-th root in characteristic 0");
  switch (f->kind) {
    case Field::Kind::finite: return a;  // Frobenius fixes the prime field
    case Field::Kind::ext: {
      // Frobenius on F_{p^2}: x -> x^p is the inverse of itself
      return v_pow(f, a, p);
    }
    case Field::Kind::ratfun: {
      const auto& x = as_rat(a);
      Poly num, den;
      auto root = [&](const Poly& g) {
        Poly r;
        if (p_is_zero(g)) return r;
        if (deg(g) % p != 0) throw unsupported_tower("p-th root: bad degree");
        r.c.resize(deg(g) / p + 1, v_zero(f->base));
        for (int i = 0; i <= deg(g); ++i) {
          if (i % p == 0)
            r.c[i / p] = v_pth_root(f->base, g.c[i]);
          else if (!v_is_zero(f->base, g.c[i]))
            throw unsupported_tower("p-th root: not a p-th power");
        }
        return r;
      };
      num = root(x.num);
      den = root(x.den);
      return ratval(f->base, std::move(num), std::move(den));
    }
    default: throw unsupported_tower("p-th root");
  }
}

namespace {

// no top-level + or binary -, so the string can sit inside a sum unchanged
bool atom_like(const std::string& s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == '+' || (c == '-' && i > 0))) return false;
  }
  return true;
}

// single token, safe as a denominator or a factor
bool token_like(const std::string& s) {
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '^')) return false;
  return !s.empty();
}

std::string wrap(const std::string& s) { return atom_like(s) ? s : "(" + s + ")"; }
std::string wrap_tight(const std::string& s) { return token_like(s) ? s : "(" + s + ")"; }

std::string poly_str(const FieldPtr& base, const Poly& a, const std::string& var) {
  if (p_is_zero(a)) return "0";
  std::string out;
  for (int i = deg(a); i >= 0; --i) {
    if (v_is_zero(base, a.c[i])) continue;
    std::string cs = v_str(base, a.c[i]);
    bool neg = false;
    std::string body = cs;
    if (!cs.empty() && cs[0] == '-' && atom_like(cs)) {
      neg = true;
      body = cs.substr(1);
    }
    std::string term;
    if (i == 0) {
      term = body;  // a sum-shaped constant term joins the sum as-is
    } else {
      std::string powstr = (i == 1) ? var : var + "^" + std::to_string(i);
      term = (body == "1") ? powstr : wrap(body) + "*" + powstr;
    }
    std::string signed_term = (neg ? "-" : "") + term;
    if (out.empty())
      out = signed_term;
    else
      out += (signed_term[0] == '-' ? "" : "+") + signed_term;
  }
  return out;
}

}  // namespace

std::string v_str(const FieldPtr& f, const Value& a) {
  switch (f->kind) {
    case Field::Kind::rationals: return std::get<mpq_class>(a.v).get_str();
    case Field::Kind::finite: return std::to_string(std::get<long>(a.v));
    case Field::Kind::ratfun: {
      const auto& x = as_rat(a);
      std::string ns = poly_str(f->base, x.num, f->var);
      if (deg(x.den) == 0 && v_eq(f->base, x.den.c[0], v_one(f->base))) return ns;
      std::string ds = poly_str(f->base, x.den, f->var);
      return wrap(ns) + "/" + wrap_tight(ds);
    }
    case Field::Kind::ext: {
      const auto& x = as_ext(a);
      bool re0 = v_is_zero(f->base, x.re), im0 = v_is_zero(f->base, x.im);
      if (im0) return v_str(f->base, x.re);
      std::string ims = v_str(f->base, x.im);
      std::string imterm;
      if (ims == "1")
        imterm = f->var;
      else if (ims == "-1")
        imterm = "-" + f->var;
      else if (!ims.empty() && ims[0] == '-')
        imterm = "-" + wrap(ims.substr(1)) + "*" + f->var;
      else
        imterm = wrap(ims) + "*" + f->var;
      if (re0) return imterm;
      std::string res = v_str(f->base, x.re);
      if (!imterm.empty() && imterm[0] == '-') return res + imterm;
      return res + "+" + imterm;
    }
  }
  throw error("unreachable");
}

std::optional<Value> v_sqrt_exact(const FieldPtr& f, const Value& a) {
  if (v_is_zero(f, a)) return v_zero(f);
  switch (f->kind) {
    case Field::Kind::rationals: {
      const mpq_class& q = std::get<mpq_class>(a.v);
      if (q < 0) return std::nullopt;
      mpz_class n = q.get_num(), d = q.get_den();
      if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
        return std::nullopt;
      mpz_class rn, rd;
      mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
      mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
      return Value{mpq_class(rn) / mpq_class(rd)};
    }
    case Field::Kind::finite: {
      long x = std::get<long>(a.v);
      if (!fp_is_square(x, f->p)) return std::nullopt;
      return Value{fp_sqrt(x, f->p)};
    }
    case Field::Kind::ratfun: {
      const auto& x = as_rat(a);
      // num/den = (num*den)/den^2; a square root of num*den over the base
      // divided by den is a square root of the value
      Poly prod = p_mul(f->base, x.num, x.den);
      auto sf = p_squarefree(f->base, prod);
      Poly root = poly_one(f->base);
      for (const auto& [g, m] : sf) {
        if (m % 2 != 0) return std::nullopt;
        for (int i = 0; i < m / 2; ++i) root = p_mul(f->base, root, g);
      }
      auto lc_root = v_sqrt_exact(f->base, prod.c.back());
      if (!lc_root) return std::nullopt;
      root = p_mul_val(f->base, root, *lc_root);
      return ratval(f->base, std::move(root), x.den);
    }
    case Field::Kind::ext: {
      const auto& x = as_ext(a);
      if (v_is_zero(f->base, x.im)) {
        if (auto r = v_sqrt_exact(f->base, x.re)) return mk_ext(*r, v_zero(f->base));
        // re = d * s^2 gives sqrt = s*g
        if (auto r = v_sqrt_exact(f->base, v_div(f->base, x.re, f->ext_d)))
          return mk_ext(v_zero(f->base), *r);
        return std::nullopt;
      }
      // (y0 + y1 g)^2 = a: y0^2 = (re ± sqrt(norm))/2 and y1 = im/(2 y0)
      Value norm = v_sub(f->base, v_mul(f->base, x.re, x.re),
                         v_mul(f->base, v_mul(f->base, x.im, x.im), f->ext_d));
      auto n = v_sqrt_exact(f->base, norm);
      if (!n) return std::nullopt;
      Value two = v_from_int(f->base, 2);
      for (int sign = 0; sign < 2; ++sign) {
        Value cand = v_div(f->base, sign ? v_sub(f->base, x.re, *n) : v_add(f->base, x.re, *n), two);
        if (auto y0 = v_sqrt_exact(f->base, cand)) {
          if (v_is_zero(f->base, *y0)) continue;
          Value y1 = v_div(f->base, x.im, v_mul(f->base, two, *y0));
          return mk_ext(*y0, y1);
        }
      }
      return std::nullopt;
    }
  }
  throw error("unreachable");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Field construction

namespace {

bool is_odd_prime(long p) {
  if (p < 3 || p % 2 == 0) return false;
  for (long d = 3; d * d <= p; d += 2)
    if (p % d == 0) return false;
  return true;
}

std::shared_ptr<Field> mk_node() { return std::make_shared<Field>(); }

}  // namespace

FieldPtr Field::rationals() {
  auto n = mk_node();
  n->kind = Kind::rationals;
  n->level = 0;
  return n;
}

FieldPtr Field::finite(long p) {
  if (!is_odd_prime(p)) throw error("finite prime layer requires an odd prime, got " + std::to_string(p));
  if (p >= (1L << 31)) throw error("prime too large");
  auto n = mk_node();
  n->kind = Kind::finite;
  n->p = p;
  n->level = 0;
  return n;
}

FieldPtr Field::ratfun(const std::string& variable, bool laurent_layer) const {
  if (variable.empty()) throw error("empty variable name");
  if (has_symbol(variable)) throw error("variable already used in tower: " + variable);
  auto n = mk_node();
  n->kind = Kind::ratfun;
  n->base = self();
  n->var = variable;
  n->is_laurent = laurent_layer;
  n->level = level + 1;
  return n;
}

FieldPtr Field::quadratic_ext(const Element& d, const std::string& generator) const {
  if (generator.empty()) throw error("empty generator name");
  if (has_symbol(generator)) throw error("generator already used in tower: " + generator);
  FieldPtr me = self();
  if (!field_equal(d.field, me)) throw field_mismatch();
  if (is_zero(d)) throw zero_element();
  if (is_square(d)) throw relation_violation("quadratic extension discriminant " + to_string(d) + " is a square");
  auto n = mk_node();
  n->kind = Kind::ext;
  n->base = me;
  n->var = generator;
  n->ext_d = d.val;
  n->level = level + 1;
  return n;
}

FieldPtr Field::conic(const Element& a, const Element& b) const {
  FieldPtr me = self();
  if (!field_equal(a.field, me) || !field_equal(b.field, me)) throw field_mismatch();
  if (is_zero(a) || is_zero(b)) throw zero_element();
  FieldPtr x0 = ratfun("X");
  auto xmut = mk_node();
  *xmut = *x0;
  xmut->conic_x = true;
  FieldPtr xf = xmut;
  // Y^2 = (X^2 + ab)/a over k(X), i.e. X^2 - aY^2 + ab = 0
  Element X = xf->generator();
  Element d = (X * X + lift(a * b, xf)) / lift(a, xf);
  FieldPtr y0 = xf->quadratic_ext(d, "Y");
  auto ymut = mk_node();
  *ymut = *y0;
  ymut->conic_y = true;
  ymut->conic_a = a.val;
  ymut->conic_b = b.val;
  return ymut;
}

long Field::characteristic() const {
  const Field* f = this;
  while (f->base) f = f->base.get();
  return f->kind == Kind::finite ? f->p : 0;
}

Element Field::zero() const { return {self(), v_zero(self())}; }
Element Field::one() const { return {self(), v_one(self())}; }
Element Field::from_int(long n) const { return {self(), v_from_int(self(), n)}; }
Element Field::from_mpq(const mpq_class& q) const { return {self(), v_from_mpq(self(), q)}; }

Element Field::generator() const {
  FieldPtr me = self();
  switch (kind) {
    case Kind::ratfun: {
      Poly num;
      num.c.push_back(v_zero(base));
      num.c.push_back(v_one(base));
      Poly den;
      den.c.push_back(v_one(base));
      return {me, Value{std::make_shared<const RatVal>(RatVal{std::move(num), std::move(den)})}};
    }
    case Kind::ext:
      return {me, Value{std::make_shared<const ExtVal>(ExtVal{v_zero(base), v_one(base)})}};
    default: throw error("prime layer has no generator");
  }
}

FieldPtr Field::find_layer(const std::string& name) const {
  const Field* f = this;
  while (f) {
    if ((f->kind == Kind::ratfun || f->kind == Kind::ext) && f->var == name) return f->self();
    f = f->base.get();
  }
  return nullptr;
}

bool Field::has_symbol(const std::string& name) const { return find_layer(name) != nullptr; }

Element Field::symbol(const std::string& name) const {
  FieldPtr layer = find_layer(name);
  if (!layer) throw unknown_symbol(name);
  return lift(layer->generator(), self());
}

// ---------------------------------------------------------------------------
// Field comparison, lifting, element operations

bool field_equal(const FieldPtr& a, const FieldPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->level != b->level) return false;
  switch (a->kind) {
    case Field::Kind::rationals: return true;
    case Field::Kind::finite: return a->p == b->p;
    case Field::Kind::ratfun:
      return a->var == b->var && a->is_laurent == b->is_laurent && field_equal(a->base, b->base);
    case Field::Kind::ext:
      return a->var == b->var && field_equal(a->base, b->base) &&
             detail::v_eq(a->base, a->ext_d, b->ext_d);
  }
  return false;
}

bool field_is_prefix(const FieldPtr& sub, const FieldPtr& sup) {
  FieldPtr f = sup;
  while (f) {
    if (field_equal(f, sub)) return true;
    if (sub && f->level <= sub->level) return false;
    f = f->base;
  }
  return false;
}

std::string to_string(const FieldPtr& f) {
  if (!f) return "?";
  std::string head;
  switch (f->kind) {
    case Field::Kind::rationals: return "Q";
    case Field::Kind::finite: return "F(" + std::to_string(f->p) + ")";
    case Field::Kind::ratfun:
      if (f->conic_x) return to_string(f->base) + ".conic_x(" + f->var + ")";
      return to_string(f->base) + (f->is_laurent ? ".laurent(" : ".rat(") + f->var + ")";
    case Field::Kind::ext:
      if (f->conic_y) {
        // fold the X layer back into the surface syntax
        const FieldPtr& xl = f->base;
        return to_string(xl->base) + ".conic(" + detail::v_str(xl->base, f->conic_a) + "," +
               detail::v_str(xl->base, f->conic_b) + ")";
      }
      return to_string(f->base) + ".sqrt(" + detail::v_str(f->base, f->ext_d) + ")";
  }
  return head;
}

Element lift(const Element& e, const FieldPtr& f) {
  if (field_equal(e.field, f)) return {f, e.val};
  if (!field_is_prefix(e.field, f)) throw field_mismatch();
  Element cur = lift(e, f->base);
  return {f, detail::v_lift1(f, cur.val)};
}

std::optional<Element> try_lower(const Element& e) {
  const FieldPtr& f = e.field;
  if (!f->base) return std::nullopt;
  switch (f->kind) {
    case Field::Kind::ratfun: {
      const RatVal& x = *std::get<std::shared_ptr<const RatVal>>(e.val.v);
      if (detail::deg(x.num) > 0 || detail::deg(x.den) > 0) return std::nullopt;
      if (detail::p_is_zero(x.num)) return Element{f->base, detail::v_zero(f->base)};
      return Element{f->base, detail::v_div(f->base, x.num.c[0], x.den.c[0])};
    }
    case Field::Kind::ext: {
      const ExtVal& x = *std::get<std::shared_ptr<const ExtVal>>(e.val.v);
      if (!detail::v_is_zero(f->base, x.im)) return std::nullopt;
      return Element{f->base, x.re};
    }
    default: return std::nullopt;
  }
}

std::optional<Element> try_lower_to(const Element& e, const FieldPtr& target) {
  Element cur = e;
  while (!field_equal(cur.field, target)) {
    auto low = try_lower(cur);
    if (!low) return std::nullopt;
    cur = *low;
  }
  return cur;
}

namespace {

std::pair<Element, Element> aligned(const Element& a, const Element& b) {
  if (field_equal(a.field, b.field)) return {a, b};
  if (field_is_prefix(a.field, b.field)) return {lift(a, b.field), b};
  if (field_is_prefix(b.field, a.field)) return {a, lift(b, a.field)};
  throw field_mismatch();
}

}  // namespace

bool is_zero(const Element& e) { return detail::v_is_zero(e.field, e.val); }
bool is_one(const Element& e) { return detail::v_eq(e.field, e.val, detail::v_one(e.field)); }

bool operator==(const Element& a, const Element& b) {
  auto [x, y] = aligned(a, b);
  return detail::v_eq(x.field, x.val, y.val);
}

Element operator+(const Element& a, const Element& b) {
  auto [x, y] = aligned(a, b);
  return {x.field, detail::v_add(x.field, x.val, y.val)};
}
Element operator-(const Element& a, const Element& b) {
  auto [x, y] = aligned(a, b);
  return {x.field, detail::v_sub(x.field, x.val, y.val)};
}
Element operator*(const Element& a, const Element& b) {
  auto [x, y] = aligned(a, b);
  return {x.field, detail::v_mul(x.field, x.val, y.val)};
}
Element operator/(const Element& a, const Element& b) {
  auto [x, y] = aligned(a, b);
  return {x.field, detail::v_div(x.field, x.val, y.val)};
}
Element operator-(const Element& a) { return {a.field, detail::v_neg(a.field, a.val)}; }
Element pow(const Element& a, long n) { return {a.field, detail::v_pow(a.field, a.val, n)}; }

std::string to_string(const Element& e) { return detail::v_str(e.field, e.val); }

std::optional<Element> sqrt_exact(const Element& e) {
  auto r = detail::v_sqrt_exact(e.field, e.val);
  if (!r) return std::nullopt;
  return Element{e.field, *r};
}

namespace {

// Unit-part squareness for Laurent layers: e = t^v * u with u(0) != 0; in
// k((t)) the unit u is a square iff its residue u(0) is (char != 2).
bool laurent_is_square(const FieldPtr& f, const Value& a) {
  const RatVal& x = *std::get<std::shared_ptr<const RatVal>>(a.v);
  int vn = detail::p_trailing_deg(f->base, x.num);
  int vd = detail::p_trailing_deg(f->base, x.den);
  if ((vn - vd) % 2 != 0) return false;
  Value rn = x.num.c[vn], rd = x.den.c[vd];
  Element res{f->base, detail::v_div(f->base, rn, rd)};
  return is_square(res);
}

}  // namespace

bool is_square(const Element& e) {
  const FieldPtr& f = e.field;
  if (is_zero(e)) return true;
  switch (f->kind) {
    case Field::Kind::rationals:
    case Field::Kind::finite: return is_square_exact(e);
    case Field::Kind::ratfun: {
      if (f->is_laurent) return laurent_is_square(f, e.val);
      const RatVal& x = *std::get<std::shared_ptr<const RatVal>>(e.val.v);
      Poly prod = detail::p_mul(f->base, x.num, x.den);
      auto sf = detail::p_squarefree(f->base, prod);
      for (const auto& [g, m] : sf)
        if (m % 2 != 0) return false;
      return is_square(Element{f->base, prod.c.back()});
    }
    case Field::Kind::ext: {
      const ExtVal& x = *std::get<std::shared_ptr<const ExtVal>>(e.val.v);
      Element d{f->base, f->ext_d};
      if (detail::v_is_zero(f->base, x.im)) {
        Element re{f->base, x.re};
        return is_square(re) || is_square(re / d);
      }
      Element re{f->base, x.re}, im{f->base, x.im};
      Element norm = re * re - im * im * d;
      auto n = sqrt_exact(norm);
      if (!n) {
        // With a non-exact square root of the norm the criterion cannot be
        // evaluated further in this model.
        if (!is_square(norm)) return false;
        throw unsupported_tower("squareness in quadratic extension needs an exact norm root");
      }
      Element two = f->base->from_int(2);
      Element c1 = (re + *n) / two, c2 = (re - *n) / two;
      return is_square(c1) || is_square(c2);
    }
  }
  throw error("unreachable");
}

// ---------------------------------------------------------------------------
// Tower surgery

FieldPtr insert_layers(const FieldPtr& tower, const FieldPtr& at, const FieldPtr& mid_tail) {
  if (field_equal(tower, at)) return mid_tail;
  if (!tower || !tower->base) throw field_mismatch();
  FieldPtr nb = insert_layers(tower->base, at, mid_tail);
  auto n = std::make_shared<Field>(*tower);
  n->base = nb;
  n->level = nb->level + 1;
  return n;
}

namespace {

Value transplant_value(const FieldPtr& from, const FieldPtr& to, const Value& a);

Poly transplant_poly(const FieldPtr& from, const FieldPtr& to, const Poly& a) {
  Poly r;
  r.c.reserve(a.c.size());
  for (const auto& x : a.c) r.c.push_back(transplant_value(from, to, x));
  return r;
}

Value transplant_value(const FieldPtr& from, const FieldPtr& to, const Value& a) {
  if (field_equal(from, to)) return a;
  if (from->kind != to->kind || from->var != to->var) {
    // `to` has extra layers on top of everything in `from`: lift
    Element lifted = lift(Element{from, a}, to);
    return lifted.val;
  }
  switch (from->kind) {
    case Field::Kind::ratfun: {
      const RatVal& x = *std::get<std::shared_ptr<const RatVal>>(a.v);
      return Value{std::make_shared<const RatVal>(RatVal{transplant_poly(from->base, to->base, x.num),
                                                         transplant_poly(from->base, to->base, x.den)})};
    }
    case Field::Kind::ext: {
      const ExtVal& x = *std::get<std::shared_ptr<const ExtVal>>(a.v);
      return Value{std::make_shared<const ExtVal>(ExtVal{transplant_value(from->base, to->base, x.re),
                                                         transplant_value(from->base, to->base, x.im)})};
    }
    default: return a;
  }
}

}  // namespace

Element transplant(const Element& e, const FieldPtr& new_tower) {
  return {new_tower, transplant_value(e.field, new_tower, e.val)};
}

}  // namespace wittlab
