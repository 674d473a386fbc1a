#pragma once

#include <vector>

#include "wideopen/scalars.hpp"

namespace wideopen {

using Vec = std::vector<Rational>;
using Matrix = std::vector<Vec>;

struct Rref {
    Matrix rows;                     // reduced rows, zero rows removed
    std::vector<std::size_t> pivots; // pivot column of each row
};

Rref rref(Matrix a, std::size_t ncols);
std::vector<Vec> nullspace(const Matrix& a, std::size_t ncols);
std::size_t rank(const Matrix& a, std::size_t ncols);

// Fraction-free (Bareiss) determinant of a square matrix.
Rational det_bareiss(Matrix a);

// Unique solution of a square system by fraction-free elimination.
Vec solve_bareiss(Matrix a, Vec b);

struct LinearOutcome {
    bool consistent = false;
    Vec solution;                     // free variables set to 0
    Vec witness;                      // y with y*A = 0 and y*b != 0
    std::vector<std::size_t> pivots;  // pivot columns
};

// Fraction-free echelon form of [A | b | I]; the identity block records the
// row combination behind an inconsistent row.
LinearOutcome solve_system_bareiss(const Matrix& a, const Vec& b, std::size_t ncols);

} // namespace wideopen
