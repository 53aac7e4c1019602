#pragma once

#include "cbflab/equilibria.hpp"
#include "cbflab/model.hpp"

namespace cbflab {

/// Circular-obstacle equivalent of an ellipsoidal scenario under the
/// similarity x_hat = E x with P = E E (E the principal SPD square root):
///   A_hat = E A E^-1,  B_hat = E B,  K_hat = K E^-1,
///   center_hat = E xc, radius 1.
///
/// Two weighting conventions coexist:
///  - `transported` carries the original G = B^T B over unchanged, which
///    makes the two closed loops exactly conjugate (F_hat(Ex) = E F(x));
///  - `fixed_rule` re-derives G from B_hat, which is the convention a
///    standalone scenario file would use. For m = 1 the two dynamics
///    coincide (the field is weighting-free); for m = 2 they differ.
struct ReducedScenario {
  Matrix2d e = Matrix2d::Identity();
  Scenario transported;
  Scenario fixed_rule;
};

/// Throws NotEllipse for circular input, BadShapeMatrix if P is not SPD.
ReducedScenario reduce(const Scenario& scenario);

/// Raw-data reduction (fixed-rule convention), usable before validation.
ScenarioData reduce_data(const ScenarioData& data);

/// Maps a report produced on the reduced scenario back to the original
/// frame: location -> E^-1 location, jacobian -> E^-1 J E; eigenvalues and
/// kind are unchanged (similarity preserves the spectrum).
EquilibriumReport map_back(const EquilibriumReport& report, const Matrix2d& e);

}  // namespace cbflab
