#ifndef WITTLAB_FIELD_HPP
#define WITTLAB_FIELD_HPP

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wittlab/errors.hpp"

namespace wittlab {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

struct Element;
struct RatVal;
struct ExtVal;

// A value of some tower field. The active alternative matches the layer kind
// of the field the value belongs to; values carry no field pointer themselves,
// so they can be shared between structurally equal towers.
struct Value {
  std::variant<mpq_class, long, std::shared_ptr<const RatVal>, std::shared_ptr<const ExtVal>> v;
  Value() : v(mpq_class(0)) {}
  explicit Value(mpq_class q) : v(std::move(q)) {}
  explicit Value(long n) : v(n) {}
  explicit Value(std::shared_ptr<const RatVal> r) : v(std::move(r)) {}
  explicit Value(std::shared_ptr<const ExtVal> e) : v(std::move(e)) {}
};

// Dense univariate polynomial over the layer below. c[i] is the coefficient of
// x^i; no trailing zero coefficients are stored, the zero polynomial is empty.
struct Poly {
  std::vector<Value> c;
};

struct RatVal {
  Poly num, den;  // canonical: den monic, num/den coprime
};

struct ExtVal {
  Value re, im;  // re + im*g with g^2 = d taken from the field node
};

// One layer of a field tower. Towers are immutable chains linked through
// `base`; the bottom is a prime layer (Q or F_p with p an odd prime).
//
// A conic layer k.conic(a,b) is realized as two nodes: a rational-function
// layer in X followed by a quadratic extension by Y with Y^2 = (X^2 + ab)/a,
// i.e. the function field of the conic X^2 - aY^2 + ab = 0.
class Field : public std::enable_shared_from_this<Field> {
 public:
  enum class Kind { rationals, finite, ratfun, ext };

  Kind kind = Kind::rationals;
  FieldPtr base;         // null for prime layers
  long p = 0;            // finite: the (odd) characteristic
  std::string var;       // ratfun: variable name; ext: generator name
  bool is_laurent = false;  // ratfun layer designated as a complete Laurent layer
  Value ext_d;           // ext: the square of the generator, a value over base
  bool conic_x = false;  // ratfun node serving as the X layer of a conic
  bool conic_y = false;  // ext node serving as the Y layer of a conic
  Value conic_a, conic_b;  // on the Y node: conic data, values over the field below X
  int level = 0;           // number of layers below this one

  static FieldPtr rationals();
  static FieldPtr finite(long p);
  FieldPtr ratfun(const std::string& variable, bool laurent_layer = false) const;
  FieldPtr laurent(const std::string& variable) const { return ratfun(variable, true); }
  // Throws relation_violation if d is a square (where decidable).
  FieldPtr quadratic_ext(const Element& d, const std::string& generator) const;
  FieldPtr conic(const Element& a, const Element& b) const;

  long characteristic() const;
  FieldPtr self() const { return shared_from_this(); }

  Element zero() const;
  Element one() const;
  Element from_int(long n) const;
  Element from_mpq(const mpq_class& q) const;
  // The generator of this layer (prime layers have none).
  Element generator() const;
  // Looks the name up through the whole tower (ratfun variables and ext
  // generators) and lifts it to this field. Throws unknown_symbol.
  Element symbol(const std::string& name) const;
  bool has_symbol(const std::string& name) const;
  // Innermost layer whose variable/generator is `name`, or null.
  FieldPtr find_layer(const std::string& name) const;
};

struct Element {
  FieldPtr field;
  Value val;

  Element() = default;
  Element(FieldPtr f, Value v) : field(std::move(f)), val(std::move(v)) {}
};

bool field_equal(const FieldPtr& a, const FieldPtr& b);
// True if `sub` equals `sup` or appears below it in the tower.
bool field_is_prefix(const FieldPtr& sub, const FieldPtr& sup);
std::string to_string(const FieldPtr& f);

bool is_zero(const Element& e);
bool is_one(const Element& e);
bool operator==(const Element& a, const Element& b);
inline bool operator!=(const Element& a, const Element& b) { return !(a == b); }
Element operator+(const Element& a, const Element& b);
Element operator-(const Element& a, const Element& b);
Element operator*(const Element& a, const Element& b);
Element operator/(const Element& a, const Element& b);
Element operator-(const Element& a);
Element pow(const Element& a, long n);
std::string to_string(const Element& e);

// Re-bases an element onto a taller tower; e.field must be a prefix of f.
Element lift(const Element& e, const FieldPtr& f);
// Strips the top layer if the value is constant there.
std::optional<Element> try_lower(const Element& e);
// Lowers through several layers until `target`, if constant all the way down.
std::optional<Element> try_lower_to(const Element& e, const FieldPtr& target);

// Squareness in the rational-function model (exact witnesses). Returns a
// square root when the answer is yes.
std::optional<Element> sqrt_exact(const Element& e);
inline bool is_square_exact(const Element& e) { return sqrt_exact(e).has_value(); }

// Squareness in the tower semantics: Laurent layers are read as complete
// fields k((t)) (a unit is a square iff its residue is). This is the predicate
// all Witt-class level decisions use. Throws unsupported_tower where genuinely
// undecidable.
bool is_square(const Element& e);

// Inserts the layers of `mid_tail` (a chain extending `at`) between `at` and
// the layers of e.field above `at`, transplanting the value. Used to adjoin a
// fresh indeterminate in the middle of a tower.
FieldPtr insert_layers(const FieldPtr& tower, const FieldPtr& at, const FieldPtr& mid_tail);
Element transplant(const Element& e, const FieldPtr& new_tower);

namespace detail {

// polynomial layer, coefficients over `f`
int deg(const Poly& a);
void norm(Poly& a, const FieldPtr& f);
Poly p_const(const Value& v, const FieldPtr& f);
bool p_is_zero(const Poly& a);
Poly p_add(const FieldPtr& f, const Poly& a, const Poly& b);
Poly p_sub(const FieldPtr& f, const Poly& a, const Poly& b);
Poly p_neg(const FieldPtr& f, const Poly& a);
Poly p_mul(const FieldPtr& f, const Poly& a, const Poly& b);
Poly p_mul_val(const FieldPtr& f, const Poly& a, const Value& s);
std::pair<Poly, Poly> p_divrem(const FieldPtr& f, const Poly& a, const Poly& b);
Poly p_gcd(const FieldPtr& f, Poly a, Poly b);  // monic
Poly p_monic(const FieldPtr& f, const Poly& a);
Poly p_derivative(const FieldPtr& f, const Poly& a);
Value p_eval(const FieldPtr& f, const Poly& a, const Value& at);
// (factor, multiplicity) pairs, factors monic square-free pairwise coprime;
// the constant leading coefficient is not included.
std::vector<std::pair<Poly, int>> p_squarefree(const FieldPtr& f, const Poly& a);
int p_trailing_deg(const FieldPtr& f, const Poly& a);  // valuation at x = 0; -1 for zero

// value layer, over field `f`
Value v_zero(const FieldPtr& f);
Value v_one(const FieldPtr& f);
Value v_from_int(const FieldPtr& f, long n);
Value v_from_mpq(const FieldPtr& f, const mpq_class& q);
bool v_is_zero(const FieldPtr& f, const Value& a);
bool v_eq(const FieldPtr& f, const Value& a, const Value& b);
Value v_add(const FieldPtr& f, const Value& a, const Value& b);
Value v_sub(const FieldPtr& f, const Value& a, const Value& b);
Value v_neg(const FieldPtr& f, const Value& a);
Value v_mul(const FieldPtr& f, const Value& a, const Value& b);
Value v_inv(const FieldPtr& f, const Value& a);
Value v_div(const FieldPtr& f, const Value& a, const Value& b);
Value v_pow(const FieldPtr& f, const Value& a, long n);
Value v_lift1(const FieldPtr& f, const Value& a);  // constant embedding base -> f
std::string v_str(const FieldPtr& f, const Value& a);
std::optional<Value> v_sqrt_exact(const FieldPtr& f, const Value& a);
Value v_pth_root(const FieldPtr& f, const Value& a);  // char p only

long fp_inv(long a, long p);
long fp_pow(long a, long e, long p);
bool fp_is_square(long a, long p);
long fp_sqrt(long a, long p);  // requires a to be a square

Value ratval(const FieldPtr& f, Poly num, Poly den);  // canonicalize num/den over f->base

}  // namespace detail

}  // namespace wittlab

#endif
