#pragma once

#include <string>
#include <vector>

namespace cylhardy {

enum class Provenance {
    ClosedFormQuasiSpherical,
    ClosedFormCylindrical,
    ClosedFormBottomP2,
    TheoremDegenerate,
    Numerical,
};

inline const char* provenance_name(Provenance p) {
    switch (p) {
        case Provenance::ClosedFormQuasiSpherical: return "closed_form_quasi_spherical";
        case Provenance::ClosedFormCylindrical: return "closed_form_cylindrical";
        case Provenance::ClosedFormBottomP2: return "closed_form_bottom_p2";
        case Provenance::TheoremDegenerate: return "theorem1_degenerate";
        case Provenance::Numerical: return "numerical";
    }
    return "?";
}

struct BoundCheck {
    std::string name;
    double bound = 0.0;
    bool is_upper = true;   // bound >= value expected when true
    bool satisfied = false;
};

struct ConstantEstimate {
    double value = 0.0;
    Provenance provenance = Provenance::Numerical;
    std::vector<double> levels;      // per-refinement-level minima (numerical runs)
    double extrapolated = 0.0;
    double error_indicator = 0.0;
    bool possibly_plateau = false;   // value indistinguishable from lambda_0^p
    bool converged = true;
    std::vector<BoundCheck> bound_checks;
};

}  // namespace cylhardy
