#ifndef WITTLAB_SQUARECLASS_HPP
#define WITTLAB_SQUARECLASS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wittlab/field.hpp"

namespace wittlab {

// Square-class coordinates over a stack of Laurent layers: the class of the
// base unit together with the exponent (mod 2) of each Laurent variable,
// innermost first.
struct LaurentCoords {
  Element base_rep;
  std::vector<std::pair<std::string, int>> exponents;
};

struct SquareClass {
  Element rep;
  bool canonical = false;
  std::optional<LaurentCoords> coords;
};

// Canonical square class: prime fields, quadratic extensions of F_p,
// rational-function layers, and Laurent towers over those. Throws
// zero_element / unsupported_tower.
SquareClass square_class(const Element& e);

// Non-canonical fallback used where a representative is needed but the tower
// has no canonical form (quadratic extensions of infinite fields).
SquareClass square_class_raw(const Element& e);

bool same_square_class(const Element& a, const Element& b);
bool same_square_class(const SquareClass& a, const SquareClass& b);

// Integer square-free part, sign preserved.
mpz_class squarefree_part(const mpz_class& n);

}  // namespace wittlab

#endif
