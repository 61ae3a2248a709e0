#pragma once

#include <random>

#include "ucover/action.hpp"
#include "ucover/quotient.hpp"
#include "ucover/tower.hpp"
#include "ucover/space.hpp"

namespace ucover::testing {

using Rng = std::mt19937;

/// Nested random relations: the coarsest keeps each pair with probability
/// `density`, each finer scale keeps a pair of the previous one with
/// probability 0.6. With `diagonal_last` the finest scale is the diagonal.
FilteredSpace random_space(Rng& rng, int n, int scales, double density, bool diagonal_last);

/// Projection of a `sheets`-fold cover of `base` built from random
/// Z/sheets voltages on the coarsest edges. Scales below `pulled` use the
/// full preimage of the base scale instead of its voltage lift.
FilteredMap voltage_cover(Rng& rng, const FilteredSpace& base, int sheets, int pulled);

/// Random surjection onto `target_size` points, with the target carrying
/// the images of the source scales.
FilteredMap pushforward_map(Rng& rng, const FilteredSpace& source, int target_size);

/// Either kind above, on at most 8 source points and at most 3 scales.
FilteredMap random_map(Rng& rng);

/// Random maps whose generation, chain lifting and strong uniqueness checks
/// all pass.
FilteredMap random_factorable_map(Rng& rng);

/// Tower of `levels` spaces whose bonding maps are random surjections, the
/// shallower spaces carrying pushed-forward scales.
SpaceTower random_space_tower(Rng& rng, int levels, int deepest_size, int scales);

/// Abelian tower whose bonding maps are onto: free groups of nondecreasing
/// rank with small random matrices made surjective through their Smith
/// form; the top group may carry torsion.
TowerAb random_surjective_tower(Rng& rng, int levels);

/// Random action on at most 9 points: a free shift of a few orbits,
/// on at most 4 points sometimes with an extra random permutation, on a random Hausdorff space
/// that is usually made invariant first.
ActionSpec random_action(Rng& rng);

}  // namespace ucover::testing
