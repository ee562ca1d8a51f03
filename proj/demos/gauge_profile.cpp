// Gauge coefficients and the resulting drive along a two-parameter schedule.

#include <cstdio>

#include "cdqa/gauge.hpp"
#include "cdqa/model.hpp"

int main() {
    using namespace cdqa;
    const int n = 20;
    const double tau = 10.0;
    const ScheduleSpec spec{tau, GammaMode::LinkedPSpin, 0.1};
    const ModelSpec model = PSpinModel{n};

    std::printf("%6s %8s %8s %10s %10s %10s %10s\n", "t/tau", "lambda", "gamma", "kappa", "alpha", "beta", "Y");
    for (int i = 0; i <= 10; ++i) {
        const double t = tau * i / 10.0;
        const auto s = evaluate(t, spec);
        const auto c = pspin_coefficients(s.lambda, s.gamma, n);
        std::printf("%6.2f %8.5f %8.5f %10.5f %10.5f %10.5f %10.5f\n", t / tau, s.lambda, s.gamma, *c.kappa, c.alpha,
                    c.beta, cd_y_coefficient(t, spec, model));
    }
}
