#include "qkdcal/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkdcal {

namespace {
constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = 1e-10;
}  // namespace

double Vec3::norm() const { return std::sqrt(dot(*this)); }

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::domain_error("Vec3: cannot normalize zero vector");
    return {x / n, y / n, z / n};
}

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }

Mat2 Mat2::identity() {
    Mat2 r;
    r.at(0, 0) = r.at(1, 1) = 1.0;
    return r;
}

Mat2 Mat2::pauli_x() {
    Mat2 r;
    r.at(0, 1) = r.at(1, 0) = 1.0;
    return r;
}

Mat2 Mat2::pauli_y() {
    Mat2 r;
    r.at(0, 1) = cplx(0.0, -1.0);
    r.at(1, 0) = cplx(0.0, 1.0);
    return r;
}

Mat2 Mat2::pauli_z() {
    Mat2 r;
    r.at(0, 0) = 1.0;
    r.at(1, 1) = -1.0;
    return r;
}

Mat2 Mat2::bloch(const Vec3& n) {
    return cplx(n.x) * pauli_x() + cplx(n.y) * pauli_y() + cplx(n.z) * pauli_z();
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.m[i] = a.m[i] + b.m[i];
    return r;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) r.at(i, j) += a.at(i, k) * b.at(k, j);
    return r;
}

Mat2 operator*(cplx s, const Mat2& a) {
    Mat2 r;
    for (int i = 0; i < 4; ++i) r.m[i] = s * a.m[i];
    return r;
}

Mat4 Mat4::adjoint() const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.at(i, j) = std::conj(at(j, i));
    return r;
}

cplx Mat4::trace() const { return at(0, 0) + at(1, 1) + at(2, 2) + at(3, 3); }

Mat4 Mat4::identity() {
    Mat4 r;
    for (int i = 0; i < 4; ++i) r.at(i, i) = 1.0;
    return r;
}

Mat4 operator+(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) r.m[i] = a.m[i] + b.m[i];
    return r;
}

Mat4 operator-(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) r.m[i] = a.m[i] - b.m[i];
    return r;
}

Mat4 operator*(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const cplx aik = a.at(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < 4; ++j) r.at(i, j) += aik * b.at(k, j);
        }
    return r;
}

Mat4 operator*(cplx s, const Mat4& a) {
    Mat4 r;
    for (int i = 0; i < 16; ++i) r.m[i] = s * a.m[i];
    return r;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    r.at(2 * i + k, 2 * j + l) = a.at(i, j) * b.at(k, l);
    return r;
}

std::array<double, 4> hermitian_eigenvalues(const Mat4& input) {
    Mat4 a = input;
    // Cyclic Jacobi with complex Givens rotations; converges in a handful of
    // sweeps at this dimension.
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < 4; ++p)
            for (int q = p + 1; q < 4; ++q) off += std::norm(a.at(p, q));
        if (off < 1e-28) break;
        for (int p = 0; p < 4; ++p) {
            for (int q = p + 1; q < 4; ++q) {
                const cplx apq = a.at(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                const cplx phase = apq / mag;
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const double tau = (app - aqq) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                Mat4 g = Mat4::identity();
                g.at(p, p) = c;
                g.at(p, q) = -s * phase;
                g.at(q, p) = s * std::conj(phase);
                g.at(q, q) = c;
                a = g.adjoint() * a * g;
            }
        }
    }
    std::array<double, 4> ev{a.at(0, 0).real(), a.at(1, 1).real(), a.at(2, 2).real(),
                             a.at(3, 3).real()};
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

double hermitian_eigenvalues_2x2_min(const Mat2& a) {
    const double tr = (a.at(0, 0) + a.at(1, 1)).real();
    const cplx det = a.at(0, 0) * a.at(1, 1) - a.at(0, 1) * a.at(1, 0);
    const double disc = std::max(0.0, tr * tr - 4.0 * det.real());
    return (tr - std::sqrt(disc)) / 2.0;
}

void TwoQubitState::validate() const {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (std::abs(rho.at(i, j) - std::conj(rho.at(j, i))) > kHermTol)
                throw std::domain_error("TwoQubitState: not Hermitian");
    if (std::abs(rho.trace() - cplx(1.0)) > kTraceTol)
        throw std::domain_error("TwoQubitState: trace != 1");
    if (hermitian_eigenvalues(rho)[3] < -kPsdTol)
        throw std::domain_error("TwoQubitState: not positive semidefinite");
}

void MeasurementModel::validate() const {
    if (std::fabs(axis.norm() - 1.0) > 1e-12)
        throw std::domain_error("MeasurementModel: axis not unit length");
    if (!(sharpness >= 0.0 && sharpness <= 1.0))
        throw std::domain_error("MeasurementModel: sharpness outside [0,1]");
    if (sharpness + std::fabs(bias) > 1.0 + 1e-12)
        throw std::domain_error("MeasurementModel: eta + |bias| > 1, effects not positive");
}

Mat2 MeasurementModel::observable() const {
    return cplx(bias) * Mat2::identity() + cplx(sharpness) * Mat2::bloch(axis);
}

Mat2 MeasurementModel::effect(int outcome_sign) const {
    const double s = outcome_sign >= 0 ? 1.0 : -1.0;
    return cplx(0.5) * (cplx(1.0 + s * bias) * Mat2::identity() +
                        cplx(s * sharpness) * Mat2::bloch(axis));
}

TwoQubitState werner_state(double visibility) {
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw std::domain_error("werner_state: visibility outside [0,1]");
    // |Phi+> = (|00> + |11>)/sqrt(2)
    Mat4 phi;
    for (int i : {0, 3})
        for (int j : {0, 3}) phi.at(i, j) = 0.5;
    TwoQubitState st;
    st.rho = cplx(visibility) * phi + cplx((1.0 - visibility) / 4.0) * Mat4::identity();
    return st;
}

double expectation_ops(const TwoQubitState& state, const Mat2& a, const Mat2& b) {
    return (state.rho * kron(a, b)).trace().real();
}

double expectation(const TwoQubitState& state, const MeasurementModel& ma,
                   const MeasurementModel& mb) {
    return expectation_ops(state, ma.observable(), mb.observable());
}

double marginal_a(const TwoQubitState& state, const MeasurementModel& ma) {
    return expectation_ops(state, ma.observable(), Mat2::identity());
}

double marginal_b(const TwoQubitState& state, const MeasurementModel& mb) {
    return expectation_ops(state, Mat2::identity(), mb.observable());
}

JointDistribution outcome_distribution(const TwoQubitState& state, const MeasurementModel& ma,
                                       const MeasurementModel& mb) {
    JointDistribution j;
    const int signs[2] = {+1, -1};
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            j.p[i][k] = expectation_ops(state, ma.effect(signs[i]), mb.effect(signs[k]));
    return j;
}

CalibrationParams true_calibration(const MeasurementModel& ma, const MeasurementModel& ma_prime) {
    if (ma.sharpness <= 0.0 || ma_prime.sharpness <= 0.0)
        throw std::domain_error("true_calibration: zero sharpness is degenerate");
    const double cosang =
        std::clamp(ma.axis.normalized().dot(ma_prime.axis.normalized()), -1.0, 1.0);
    const double theta = std::acos(cosang);
    if (std::sin(theta) <= 0.0)
        throw std::domain_error("true_calibration: (anti)parallel axes, angle degenerate");
    return CalibrationParams(-ma.bias / ma.sharpness, 1.0 / ma.sharpness,
                             -ma_prime.bias / ma_prime.sharpness, 1.0 / ma_prime.sharpness,
                             theta);
}

}  // namespace qkdcal
