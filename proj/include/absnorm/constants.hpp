#pragma once

namespace absnorm {

// Sum-LASQ transfer bound g(mu).
//
// Let Z = X (+)_F Y, y in S_Y with inf_v' psi_Y(y, v') >= mu, where
// psi(w, z) = max(| ||w+z|| - 1 |, | ||w-z|| - 1 |). Take a unit z = (u, v)
// in Z with psi_Z((0,y), z) < gamma, i.e. F(||u||, ||y +- v||) in (1-gamma, 1+gamma).
//   1. Convexity of F in its second slot plus ||y+v|| + ||y-v|| >= 2 and
//      monotonicity give F(||u||, 1) < 1 + gamma.
//   2. If gamma <= lasq2_modulus(F, eps) then ||v|| >= 1 - eps, since
//      F(||u||, ||v||) = 1.
//   3. ||y +- v|| <= F(||u||, ||y +- v||) < 1 + gamma, and
//      ||y + v|| >= 2 - ||y - v|| > 1 - gamma, so | ||y +- v|| - 1 | < gamma.
//   4. With v^ = v/||v||, ||v - v^|| = 1 - ||v|| <= eps, so psi_Y(y, v^) < gamma + eps.
// Choosing eps = mu/2 and gamma = min(lasq2_modulus(F, mu/2), mu/2) makes
// gamma + eps <= mu, contradicting the choice of y. Hence every unit z has
// psi_Z((0,y), z) >= g(mu) := min(lasq2_modulus(F, mu/2), mu/2), and
// lambda(Z) >= g(mu).
inline constexpr double kTransferEpsShare = 0.5;
inline constexpr double kTransferCapShare = 0.5;

// Near-isometry stability of s: with ||T|| = 1 and ||T^-1|| <= 1 + delta,
// y in S_Y, x = T^-1 y / ||T^-1 y||, x' in S_X with ||x +- x'|| >= s(X) - eps,
// y' = T x' / ||T x'||. Both normalising factors lie in [1, 1 + delta], so
//   ||y +- y'|| >= ||T(x +- x')|| - 2 delta >= (s(X) - eps)/(1 + delta) - 2 delta
//              >= s(X) - eps - s(X) delta - 2 delta >= s(X) - eps - 4 delta
// using s(X) <= 2. Rescaling T does not change ||T|| ||T^-1||, so
// s(Y) >= s(X) - 4 delta whenever ||T|| ||T^-1|| <= 1 + delta.
inline constexpr double kNearIsometryConstant = 4.0;

}  // namespace absnorm
