#pragma once

#include "fidcorr/density.hpp"

namespace fidcorr::oracle {

/// -Tr{rho log2 rho} from the eigenvalues, with 0 log 0 = 0. Throws
/// non_physical_state for an eigenvalue below -1e-8.
double entropy_exact(const DensityMatrix& rho);

/// log2(dim) - S(rho) for rho = (1 + beta D)/dim, evaluated as
/// [beta Tr D + sum_k h2(beta mu_k)] / (dim ln 2) with h2(x) = (1+x)ln(1+x) - x.
/// Stays accurate when the deficit is many orders below log2(dim).
double entropy_deficit(const DeviationState& state);
double entropy(const DeviationState& state);

struct MutualInformation {
  double exact = 0.0;       // eigenvalue entropies
  double trace_form = 0.0;  // lowest order in beta
};

/// Mutual information of a two-factor state with layout (d1, d2), in bits.
MutualInformation mutual_info_numeric(const DeviationState& pair, int d1, int d2);
double mutual_info_exact(const DensityMatrix& pair, int d1, int d2);

/// (1 + x) ln(1 + x) - x, accurate for small |x|.
double entropy_kernel(double x);

}  // namespace fidcorr::oracle
