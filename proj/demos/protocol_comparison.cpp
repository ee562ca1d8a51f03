// Final fidelity, residual energy and TTS of the three protocols for one
// p-spin instance. Usage: protocol_comparison [N] [tau]

#include <cstdio>
#include <cstdlib>

#include "cdqa/dynamics.hpp"

int main(int argc, char** argv) {
    using namespace cdqa;
    const int n = argc > 1 ? std::atoi(argv[1]) : 30;
    const double tau = argc > 2 ? std::atof(argv[2]) : 300.0;
    const ModelSpec model = PSpinModel{n};

    IntegratorConfig cfg;
    cfg.method = IntegrationMethod::PiecewiseExponential;

    std::printf("N=%d tau=%g\n%-5s %12s %12s %12s\n", n, tau, "", "fidelity", "residual", "tts");
    for (Protocol p : {Protocol::TraditionalQA, Protocol::SingleParamCD, Protocol::TwoParamCD}) {
        const ScheduleSpec spec{tau, default_gamma_mode(p, model), 0.1};
        const auto r = run_protocol(spec, {p, Frame::Rotated, model}, cfg);
        std::printf("%-5s %12.6f %12.6f %12.6g\n", to_string(p), r.fidelity, r.residual_energy, r.tts);
    }
}
