// Two-level sweep with and without the counter-diabatic drive.

#include <cstdio>

#include "cdqa/dynamics.hpp"

int main() {
    using namespace cdqa;
    const ModelSpec model = LandauZenerModel{0.1};
    std::printf("%8s %14s %14s\n", "tau", "F(qa)", "F(cd1)");
    for (double tau : {0.1, 1.0, 10.0, 100.0}) {
        const ScheduleSpec spec{tau, GammaMode::Constant, 1.0};
        const auto qa = run_protocol(spec, {Protocol::TraditionalQA, Frame::Lab, model}, {});
        const auto cd = run_protocol(spec, {Protocol::SingleParamCD, Frame::Lab, model}, {});
        std::printf("%8g %14.10f %14.10f\n", tau, qa.fidelity, cd.fidelity);
    }
}
