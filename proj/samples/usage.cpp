// Quality measures of a small system, and a tight frame with prescribed norms.

#include <iostream>

#include "ctrlframe/ctrlframe.hpp"

int main() {
    using namespace ctrlframe;

    const LtiSystem sys(Matrix{{1.0, 0.0}, {0.0, 2.0}}, Matrix{{1.0}, {1.0}});
    const QualityReport r = quality_report(sys, 2);
    std::cout << "mu = " << r.mu << ", trace(W^-1) = " << r.trace_inv_grammian
              << ", verdict " << to_string(r.sufficiency) << '\n';

    const FrameSequence f = tight_frame_with_norms({1.0, 1.0, 1.0}, 2);
    const TightnessReport t = tightness(f);
    std::cout << "constructed frame: tight = " << std::boolalpha << t.is_tight << ", a = " << t.frame_constant
              << ", NFP = " << normalized_frame_potential(f) << '\n';

    const ControlPlan plan = min_energy_control(LtiSystem(Matrix{{0.0, 1.0}, {0.0, 0.0}}, Matrix{{0.0}, {1.0}}),
                                                {0.0, 0.0}, {1.0, 1.0}, 2);
    std::cout << "double integrator to (1, 1): effort " << plan.effort << '\n';
    return 0;
}
