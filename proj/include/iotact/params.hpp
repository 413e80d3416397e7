// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace iotact {

/// Physical-layer and deployment parameters. Units: densities in 1/m^2,
/// powers and the activation threshold in W.
///
/// Defaults are the reference deployment (lambda_d = 100 lambda_b).
struct NetworkParams
{
    double lambda_b = 8e-5;   // BS density
    double lambda_d = 8e-3;   // device density
    double p_bar = 20.0;      // BS transmit power
    double q_bar = 0.2;       // device transmit power
    double theta_a = 1e-7;    // activation threshold
    double theta_c = 1.0;     // SIR threshold
    double mu = 0.25;         // BS active probability
    double rho = 0.01;        // per-RB allocation probability
    double alpha = 4.0;       // path-loss exponent
    double m = 1.0;           // Nakagami shape
    double lambda_b_min = 5e-6;
    double lambda_b_max = 3e-4;

    /// Throws DomainError naming the first violated invariant. theta_a may be
    /// +inf (nothing is ever activated).
    void validate() const;

    double delta() const { return 2.0 / alpha; }
    double density_ratio() const { return lambda_d / lambda_b; }

    /// Same deployment at another BS density, keeping lambda_d / lambda_b.
    NetworkParams with_lambda_b(double value) const;
};

}  // namespace iotact
