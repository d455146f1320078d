#pragma once

namespace cev {

// Market/process parameters for dS = (r - q) S dt + sigma S^{beta/2} dW.
// beta = 2 is lognormal; beta < 2 makes local volatility rise as the price
// falls and gives the origin an absorbing boundary.
struct CevParams {
    double s0 = 1.0;
    double sigma = 0.2;
    double beta = 2.0;
    double r = 0.05;
    double q = 0.0;
};

enum class OptionKind { put, call };

// Basic domain checks; sigma = 0 is admitted (degenerate drift-only process,
// useful for the Monte Carlo module). Throws validation_error.
void validate(const CevParams& p);

// Lattice construction additionally needs sigma > 0, 0 < beta <= 2 and q = 0.
void validate_for_tree(const CevParams& p);

} // namespace cev
