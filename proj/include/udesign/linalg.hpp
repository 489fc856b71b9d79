#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace udesign {

using cplx = std::complex<double>;
// Dense matrices are row-major throughout; vectors are plain Eigen columns.
using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// A request exceeded the configured dense-dimension budget.
struct BudgetError : std::runtime_error {
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver hit its iteration cap without meeting tolerance.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Bad user-supplied parameters (CLI maps this to its own exit code).
struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Default cap on the linear dimension of dense operators.  Overridable via
// the UDESIGN_DIM_CAP environment variable (read once) or per call.
std::size_t dense_dim_cap();
void set_dense_dim_cap(std::size_t cap);

// ipow with overflow check; throws ConfigError on overflow.
std::size_t checked_pow(std::size_t base, unsigned exp);

CMat kron(const CMat& a, const CMat& b);

// U^{\otimes t}; factor 1 is the most significant digit of the composite index.
CMat tensor_power(const CMat& u, unsigned t, std::size_t cap = 0);

// t unconjugated copies followed by t conjugated copies.  The first t factors
// occupy the most significant index digits.
CMat tensor_power_conj(const CMat& u, unsigned t, std::size_t cap = 0);

inline CMat dagger(const CMat& m) { return m.adjoint(); }

double max_abs(const CMat& m);
bool is_hermitian(const CMat& m, double tol = 1e-12);
bool is_unitary(const CMat& m, double tol = 1e-10);

// All eigenvalues of a Hermitian matrix, ascending.  Throws ConvergenceError
// if the underlying solver fails.
RVec eigenvalues_hermitian(const CMat& m);

// Spectral norm (largest singular value), relative tolerance 1e-10.
// Hermitian inputs use a symmetric eigensolve (dense) or certified Lanczos
// (large); general inputs go through M^dagger M.  Never silently degrades:
// iterative failure raises ConvergenceError.
double operator_norm(const CMat& m, double tol = 1e-10);

// Matrix-free spectral norm of a Hermitian operator given by its action.
double operator_norm_hermitian(
    const std::function<void(const CVec&, CVec&)>& apply, Eigen::Index dim,
    double tol = 1e-10, int max_iter = 1000);

// In-place orthonormal Walsh-Hadamard transform of a length-2^m vector
// (butterfly (a+b, a-b)/sqrt(2) per stage).
void fwht(CVec& v);
// Applies H^{\otimes m} on the left (all columns) / right (all rows).
void fwht_columns(CMat& m);
void fwht_rows(CMat& m);

}  // namespace udesign
