#pragma once

#include "pvt/geometry.hpp"

namespace pvt {

struct SectionSummary {
    double p_a = 0.0;       // interior tessellation vertices per unit area
    double n_a = 0.0;       // cells per unit area
    double l_a = 0.0;       // interior edge length per unit area
    double mean_area = 0.0; // mean cell area (complete and clipped cells)
    int n_cells = 0;
};

enum class LambdaMethod { P, N, L, a };

struct LambdaEstimate {
    double value = 0.0;
    LambdaMethod method = LambdaMethod::a;
};

// c1 = (8/15) (3/4)^{1/3} pi^{5/3} Gamma(4/3): vertex density prefactor.
// c2 = pi (pi/6)^{1/3} Gamma(5/3): edge length density prefactor.
double stereology_c1();
double stereology_c2();

// Vertices and edges on the window boundary are window artifacts and are
// excluded from the per-area densities; clipped cells still count in n_a and
// in the mean area.
SectionSummary summarize_section(const SectionTessellation& tess);

LambdaEstimate estimate_lambda(const SectionSummary& summary, LambdaMethod method);

const char* lambda_method_name(LambdaMethod m);

}  // namespace pvt
