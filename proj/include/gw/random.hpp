#pragma once
// Seeded random instances: words, elements of factors and Grushko trees.

#include <cstdint>
#include <random>
#include <string>

#include "gw/tree.hpp"

namespace gw {

using Rng = std::mt19937_64;

// uniform in [0, n)
inline int64_t draw(Rng& rng, int64_t n) { return static_cast<int64_t>(rng() % static_cast<uint64_t>(n)); }

FactorElement random_factor_element(const Presentation& p, int factor, Rng& rng, int letters = 2);
// product of `len` random generator powers (exponents in [-3, 3] minus 0)
NormalWord random_word(const PresPtr& p, Rng& rng, int len);
NormalWord random_nonperipheral(const PresPtr& p, Rng& rng, int len);
// cyclically reduced non-peripheral word with exactly `len` free letters and no
// factor syllables (the classical case)
NormalWord random_free_word(const PresPtr& p, Rng& rng, int len);

// One random collapse or blow-up followed by normalization; false if the
// draw was not a legal move.
bool random_move(const GrushkoTree& t, Rng& rng, GrushkoTree& out);
GrushkoTree random_tree(const PresPtr& p, uint64_t seed, int steps);
// `steps` accepted moves, never letting |g|_T exceed L
GrushkoTree random_tree_in_OL(const PresPtr& p, const NormalWord& g, int L, uint64_t seed, int steps);

}  // namespace gw
