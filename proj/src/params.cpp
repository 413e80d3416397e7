// Copyright 2026 The iotact Authors
// SPDX-License-Identifier: Apache-2.0

#include "iotact/params.hpp"

#include <cmath>
#include <string>

#include "iotact/errors.hpp"

namespace iotact {

namespace {

void require(bool ok, const char* what)
{
    if (!ok) {
        throw DomainError(std::string("NetworkParams: ") + what);
    }
}

bool positive_finite(double v)
{
    return v > 0.0 && std::isfinite(v);
}

}  // namespace

void NetworkParams::validate() const
{
    require(positive_finite(lambda_b), "lambda_b must be finite and > 0");
    require(positive_finite(lambda_d), "lambda_d must be finite and > 0");
    require(positive_finite(p_bar), "p_bar must be finite and > 0");
    require(positive_finite(q_bar), "q_bar must be finite and > 0");
    require(theta_a > 0.0, "theta_a must be > 0");
    require(positive_finite(theta_c), "theta_c must be finite and > 0");
    require(mu > 0.0 && mu < 1.0, "mu must lie in (0,1)");
    require(rho > 0.0 && rho < 1.0, "rho must lie in (0,1)");
    require(alpha > 2.0 && std::isfinite(alpha), "alpha must be > 2");
    require(m >= 0.5 && std::isfinite(m), "m must be >= 0.5");
    require(positive_finite(lambda_b_min) && positive_finite(lambda_b_max),
            "lambda_b_min and lambda_b_max must be finite and > 0");
    require(lambda_b_min <= lambda_b && lambda_b <= lambda_b_max,
            "lambda_b must lie in [lambda_b_min, lambda_b_max]");
}

NetworkParams NetworkParams::with_lambda_b(double value) const
{
    NetworkParams out = *this;
    out.lambda_d = density_ratio() * value;
    out.lambda_b = value;
    return out;
}

}  // namespace iotact
