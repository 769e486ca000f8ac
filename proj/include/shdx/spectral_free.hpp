#pragma once

#include <vector>

#include "shdx/types.hpp"

namespace shdx {

struct FreeMode {
    int k = 0;
    double alpha_k = 0.0;
    double lambda_plus = 0.0;   // (2/h) sin alpha_k
    double lambda_minus = 0.0;  // -(2/h) sin alpha_k
    int multiplicity = 0;
};

struct SpectrumEntry {
    double value = 0.0;
    int multiplicity = 0;
};

// Spectrum of the Hessian form with B = 0.
struct FreeSpectrum {
    int m = 0;
    int n_steps = 0;
    double h = 0.0;
    UnitCircleParam omega;
    std::vector<FreeMode> modes;
    std::vector<SpectrumEntry> entries;  // ascending, equal values merged

    std::vector<double> values() const;  // all 2mN eigenvalues, ascending
};

FreeSpectrum free_spectrum(int m, int n_steps, double h, UnitCircleParam omega);

struct FreeEigenvector {
    int k = 0;
    int branch = 1;             // +1 or -1
    int component = 0;          // which unit vector a0 = e_component
    double recursion_value = 0.0;  // lambda with J (z_{n+1} - z_n) = h lambda z~_n
    double hessian_value = 0.0;    // eigenvalue of the assembled form, -lambda
    CVector values;             // z~_1 .. z~_N, each (x_{n+1}, y_n)
};

// Orthonormal eigenbasis of the free form.
std::vector<FreeEigenvector> free_eigenvectors(int m, int n_steps, double h, UnitCircleParam omega);

// Real eigenvectors for omega = 1 built from cos and sin of 2 n alpha_k.
std::vector<Vector> free_real_eigenvectors(int m, int n_steps, double h, int k, int branch);

}  // namespace shdx
