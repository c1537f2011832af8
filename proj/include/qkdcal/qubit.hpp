#pragma once

#include <array>
#include <complex>

#include "qkdcal/calibration.hpp"
#include "qkdcal/entropy.hpp"

namespace qkdcal {

using cplx = std::complex<double>;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const;
    Vec3 normalized() const;

    static Vec3 z_axis() { return {0.0, 0.0, 1.0}; }
    static Vec3 x_axis() { return {1.0, 0.0, 0.0}; }
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& v);

// Dense 2x2 / 4x4 complex matrices, row-major. The dimension is fixed and
// tiny, so the algebra is hand-rolled rather than pulled from a linear
// algebra package.
struct Mat2 {
    std::array<cplx, 4> m{};

    cplx& at(int i, int j) { return m[2 * i + j]; }
    const cplx& at(int i, int j) const { return m[2 * i + j]; }

    static Mat2 identity();
    static Mat2 pauli_x();
    static Mat2 pauli_y();
    static Mat2 pauli_z();
    // n . sigma for a Bloch vector n (not necessarily unit).
    static Mat2 bloch(const Vec3& n);
};

Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator*(cplx s, const Mat2& a);

struct Mat4 {
    std::array<cplx, 16> m{};

    cplx& at(int i, int j) { return m[4 * i + j]; }
    const cplx& at(int i, int j) const { return m[4 * i + j]; }

    Mat4 adjoint() const;
    cplx trace() const;

    static Mat4 identity();
};

Mat4 operator+(const Mat4& a, const Mat4& b);
Mat4 operator-(const Mat4& a, const Mat4& b);
Mat4 operator*(const Mat4& a, const Mat4& b);
Mat4 operator*(cplx s, const Mat4& a);

Mat4 kron(const Mat2& a, const Mat2& b);

// Eigenvalues of a Hermitian 4x4 matrix via cyclic complex Jacobi rotations,
// returned in descending order.
std::array<double, 4> hermitian_eigenvalues(const Mat4& a);

double hermitian_eigenvalues_2x2_min(const Mat2& a);

// Two-qubit density matrix. validate() checks Hermiticity, unit trace and
// positive semidefiniteness.
struct TwoQubitState {
    Mat4 rho;

    void validate() const;  // throws std::domain_error on violation
};

// Dichotomic qubit POVM: effects E+- = ((1 +- bias) I +- sharpness n.sigma)/2.
// The associated +-1 observable is bias*I + sharpness*(n.sigma).
struct MeasurementModel {
    Vec3 axis;
    double sharpness = 1.0;  // eta in [0,1]
    double bias = 0.0;       // b, |b| <= 1 - eta

    void validate() const;  // throws std::domain_error on violation
    Mat2 observable() const;
    Mat2 effect(int outcome_sign) const;  // +1 or -1

    static MeasurementModel sharp(const Vec3& axis) { return {axis.normalized(), 1.0, 0.0}; }
};

// v |Phi+><Phi+| + (1-v) I/4. Throws std::domain_error for v outside [0,1].
TwoQubitState werner_state(double visibility);

// tr[rho (A (x) B)] for explicit single-qubit operators.
double expectation_ops(const TwoQubitState& state, const Mat2& a, const Mat2& b);

// tr[rho (A (x) B)] for the observables of two measurement models.
double expectation(const TwoQubitState& state, const MeasurementModel& ma,
                   const MeasurementModel& mb);

// Marginals tr[rho (A (x) I)] and tr[rho (I (x) B)].
double marginal_a(const TwoQubitState& state, const MeasurementModel& ma);
double marginal_b(const TwoQubitState& state, const MeasurementModel& mb);

// p(a,b) = tr[rho (E_a (x) F_b)].
JointDistribution outcome_distribution(const TwoQubitState& state, const MeasurementModel& ma,
                                       const MeasurementModel& mb);

// Calibration parameters realized by a concrete pair of Alice's measurements:
// x1 = -b1/eta1, x2 = 1/eta1, x3 = -b2/eta2, x4 = 1/eta2, theta the angle
// between the Bloch axes. Throws std::domain_error for zero sharpness or
// (anti)parallel axes (R is singular there).
CalibrationParams true_calibration(const MeasurementModel& ma, const MeasurementModel& ma_prime);

}  // namespace qkdcal
