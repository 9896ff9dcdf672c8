#pragma once

#include "absnorm/norm2.hpp"
#include "absnorm/report.hpp"
#include "absnorm/space.hpp"

namespace absnorm {

/// Both biconditionals of the extreme-norm lemma on a (resolution+1)^2 grid:
/// classification as the 1-norm (resp. max norm) iff F agrees with it at
/// every grid point.
VerificationReport check_lemma_infty(const AbsoluteNorm& F, int resolution = 256);

/// For sampled a with b = f(a) and c in [0, 1+a]: F(c,b) >= 2 - 1e-9 forces
/// c = 1+a and a >= r_F. samples counts (a, c) pairs.
VerificationReport check_loh2(const AbsoluteNorm& F, long samples = 10000);

/// With delta = loh3_modulus(F, eps), an independent finer grid must never
/// show F(c,b) >= 2 - delta together with c < 1 + r_F - eps. resolution is
/// the number of a-nodes; each gets 100 c-nodes.
VerificationReport check_loh3(const AbsoluteNorm& F, double eps, int resolution = 100);

struct PropLohOptions {
  long resolution = 256;  // sphere samples per factor
  int arc_samples = 256;  // samples of the F-sphere arc
  SearchOptions sum;      // certified s of the sum (global form)
  SearchOptions factor;   // certified s of X
};

/// Replays the proof chain of the LOH proposition on samples and checks the
/// global contrapositive s_upper(X) < 2 r_F - eps => s_upper(X (+)_F Y) < 2 - delta'.
VerificationReport check_prop_loh(const FiniteSpace& X, const FiniteSpace& Y,
                                  const AbsoluteNorm& F, double eps,
                                  const PropLohOptions& options = {});

/// g(mu) = min(lasq2_modulus(F, mu/2), mu/2); derivation in constants.hpp.
double transfer_bound(const AbsoluteNorm& F, double mu);

struct TransferOptions {
  SearchOptions factor;  // lasq defect of Y
  SearchOptions sum;     // lasq defect of the sum
  long resolution = 4096;  // sum-sphere samples for the pointwise check
};

/// If lambda(Y) >= mu is certified, no sampled unit z of the sum may have
/// psi((0,y), z) < g(mu), and the sum's certified defect must reach g(mu).
VerificationReport check_sum_lasq_transfer(const FiniteSpace& X, const FiniteSpace& Y,
                                           const AbsoluteNorm& F, double mu,
                                           const TransferOptions& options = {});

struct AsqOptions {
  long resolution = 256;
  int arc_samples = 128;
};

/// With delta = asq_obstruction(F): for sampled x, y and unit (u,v), one of
/// F(||x+-u||, ||v||), F(||u||, ||y+-v||) exceeds 1 + delta.
VerificationReport check_asq_impossible(const FiniteSpace& X, const FiniteSpace& Y,
                                        const AbsoluteNorm& F,
                                        const AsqOptions& options = {});

}  // namespace absnorm
