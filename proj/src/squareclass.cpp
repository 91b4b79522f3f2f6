#include "wittlab/squareclass.hpp"

namespace wittlab {

using namespace detail;

mpz_class squarefree_part(const mpz_class& n) {
  if (n == 0) return 0;
  mpz_class m = abs(n), out = (n < 0) ? -1 : 1;
  for (mpz_class d = 2; d * d <= m && d < 1000000; ++d) {
    if (m % d != 0) continue;
    int mult = 0;
    while (m % d == 0) {
      m /= d;
      ++mult;
    }
    if (mult % 2 != 0) out *= d;
  }
  // leftover is 1, a prime, a prime square, or a product of two distinct primes
  if (mpz_perfect_square_p(m.get_mpz_t())) return out;
  return out * m;
}

namespace {

Element fp_class_rep(const FieldPtr& f, const Element& e) {
  if (is_square(e)) return f->one();
  for (long x = 2; x < f->p; ++x)
    if (!fp_is_square(x, f->p)) return f->from_int(x);
  throw error("no nonsquare found");
}

// F_{p^2}: squareness by the (q-1)/2 power; representative 1 or the first
// nonsquare in a fixed enumeration order.
Element fq2_class_rep(const FieldPtr& f, const Element& e) {
  long p = f->characteristic();
  long q = p * p;
  Element x = e;
  Element powv = pow(x, (q - 1) / 2);
  if (is_one(powv)) return f->one();
  for (long re = 0; re < p; ++re)
    for (long im = 0; im < p; ++im) {
      if (re == 0 && im == 0) continue;
      Element cand = f->from_int(re) + f->from_int(im) * f->generator();
      if (!is_one(pow(cand, (q - 1) / 2))) return cand;
    }
  throw error("no nonsquare found");
}

bool is_fq2(const FieldPtr& f) {
  return f->kind == Field::Kind::ext && f->base->kind == Field::Kind::finite;
}

SquareClass klass(const Element& e);

// e = u * M mod squares, M the monic odd-multiplicity square-free product of
// num*den, u the leading coefficient; recurse on u.
SquareClass ratfun_class(const Element& e) {
  const FieldPtr& f = e.field;
  const RatVal& x = *std::get<std::shared_ptr<const RatVal>>(e.val.v);
  Poly prod = p_mul(f->base, x.num, x.den);
  auto sf = p_squarefree(f->base, prod);
  Poly m;
  m.c.push_back(v_one(f->base));
  for (const auto& [g, mult] : sf)
    if (mult % 2 != 0) m = p_mul(f->base, m, g);
  SquareClass uc = klass(Element{f->base, prod.c.back()});
  Element rep = lift(uc.rep, f) * Element{f, Value{std::make_shared<const RatVal>(RatVal{
                                                m, p_const(v_one(f->base), f->base)})}};
  return {rep, uc.canonical, std::nullopt};
}

SquareClass laurent_class(const Element& e) {
  const FieldPtr& f = e.field;
  const RatVal& x = *std::get<std::shared_ptr<const RatVal>>(e.val.v);
  int vn = p_trailing_deg(f->base, x.num), vd = p_trailing_deg(f->base, x.den);
  long v = vn - vd;
  Element residue{f->base, v_div(f->base, x.num.c[vn], x.den.c[vd])};
  SquareClass base_cls = klass(residue);
  Element rep = lift(base_cls.rep, f);
  if (v % 2 != 0) rep = rep * f->generator();
  LaurentCoords coords;
  if (base_cls.coords) {
    coords = *base_cls.coords;
  } else {
    coords.base_rep = base_cls.rep;
  }
  coords.exponents.emplace_back(f->var, static_cast<int>(((v % 2) + 2) % 2));
  return {rep, base_cls.canonical, coords};
}

SquareClass klass(const Element& e) {
  const FieldPtr& f = e.field;
  switch (f->kind) {
    case Field::Kind::rationals: {
      const mpq_class& q = std::get<mpq_class>(e.val.v);
      mpz_class sf = squarefree_part(q.get_num() * q.get_den());
      return {f->from_mpq(mpq_class(sf)), true, std::nullopt};
    }
    case Field::Kind::finite: return {fp_class_rep(f, e), true, std::nullopt};
    case Field::Kind::ratfun: return f->is_laurent ? laurent_class(e) : ratfun_class(e);
    case Field::Kind::ext:
      if (is_fq2(f)) return {fq2_class_rep(f, e), true, std::nullopt};
      throw unsupported_tower("canonical square classes over " + to_string(f));
  }
  throw error("unreachable");
}

}  // namespace

SquareClass square_class(const Element& e) {
  if (is_zero(e)) throw zero_element();
  return klass(e);
}

SquareClass square_class_raw(const Element& e) {
  if (is_zero(e)) throw zero_element();
  try {
    return klass(e);
  } catch (const unsupported_tower&) {
    return {e, false, std::nullopt};
  }
}

bool same_square_class(const Element& a, const Element& b) {
  if (is_zero(a) || is_zero(b)) throw zero_element();
  return is_square(a * b);
}

bool same_square_class(const SquareClass& a, const SquareClass& b) {
  if (a.canonical && b.canonical) return a.rep == b.rep;
  return same_square_class(a.rep, b.rep);
}

}  // namespace wittlab
