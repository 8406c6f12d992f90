#pragma once

#include <utility>
#include <vector>

#include "siegel/poly.hpp"

namespace siegel {

struct QFactor {
    QPoly factor;  // monic, irreducible over Q
    int multiplicity;
};

// Factor a nonzero rational polynomial into monic irreducibles.
std::vector<QFactor> factor_rational(const QPoly& f);
bool is_irreducible(const QPoly& f);
// Square-free decomposition: f = prod g_i^i (monic g_i).
std::vector<QPoly> squarefree_decomposition(const QPoly& f);

}  // namespace siegel
