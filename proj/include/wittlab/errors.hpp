#ifndef WITTLAB_ERRORS_HPP
#define WITTLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wittlab {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unknown_symbol : error {
  explicit unknown_symbol(const std::string& sym) : error("unknown symbol: " + sym) {}
};
struct division_by_zero : error {
  division_by_zero() : error("division by zero") {}
};
struct zero_element : error {
  zero_element() : error("zero element not allowed here") {}
};
struct zero_scalar : error {
  zero_scalar() : error("zero scalar not allowed here") {}
};
struct zero_slot : error {
  zero_slot() : error("zero Pfister slot") {}
};
struct relation_violation : error {
  explicit relation_violation(const std::string& what) : error("relation violation: " + what) {}
};
struct unsupported_tower : error {
  explicit unsupported_tower(const std::string& what) : error("unsupported tower: " + what) {}
};
struct field_mismatch : error {
  field_mismatch() : error("elements/forms live over different fields") {}
};
struct not_laurent_layer : error {
  explicit not_laurent_layer(const std::string& what) : error("not a Laurent layer: " + what) {}
};
struct non_monomial_entry : error {
  explicit non_monomial_entry(const std::string& what) : error("non-monomial entry: " + what) {}
};
struct even_ramification : error {
  even_ramification() : error("ramification index must be odd") {}
};
struct conic_mismatch : error {
  conic_mismatch() : error("conic layer does not match the algebra") {}
};

struct syntax_error : error {
  std::size_t position;
  syntax_error(const std::string& what, std::size_t pos)
      : error("syntax error at " + std::to_string(pos) + ": " + what), position(pos) {}
};

}  // namespace wittlab

#endif
