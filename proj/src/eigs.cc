#include "seep/eigs.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <arpack/arpack.hpp>

#include "seep/errors.h"
#include "seep/rng.h"

namespace seep {
namespace {

void CheckCount(Eigen::Index n, int count) {
  if (count < 1 || count > n) {
    throw DataError("eigs: requested " + std::to_string(count) +
                    " eigenpairs of a " + std::to_string(n) + "x" +
                    std::to_string(n) + " matrix");
  }
}

// Picks `count` pairs out of a full ascending decomposition.
EigsResult Select(const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors,
                  int count, Which which) {
  const Eigen::Index n = values.size();
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (which == Which::kLargestMagnitude) {
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(values[a]) > std::abs(values[b]);
    });
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
  } else {
    idx.resize(count);
  }
  EigsResult out;
  out.eigenvalues.resize(count);
  out.eigenvectors.resize(vectors.rows(), count);
  for (int j = 0; j < count; ++j) {
    out.eigenvalues[j] = values[idx[j]];
    out.eigenvectors.col(j) = vectors.col(idx[j]);
  }
  return out;
}

EigsResult DenseEigs(const Eigen::MatrixXd& m, int count, Which which) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("dense symmetric eigensolver failed");
  }
  return Select(solver.eigenvalues(), solver.eigenvectors(), count, which);
}

EigsResult ArpackEigs(const Eigen::SparseMatrix<double>& m, int count,
                      Which which, const EigsOptions& options) {
  const a_int n = static_cast<a_int>(m.rows());
  const a_int nev = count;
  const a_int ncv = std::min<a_int>(n, std::max<a_int>(2 * nev + 1, nev + 20));
  const a_int ldv = n;
  const a_int lworkl = ncv * (ncv + 8);
  const auto ritz = which == Which::kLargestMagnitude
                        ? arpack::which::largest_magnitude
                        : arpack::which::smallest_algebraic;

  std::vector<double> resid(n), v(static_cast<std::size_t>(n) * ncv),
      workd(3 * static_cast<std::size_t>(n)), workl(lworkl);
  Rng rng(options.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (double& x : resid) x = unif(rng);

  a_int iparam[11] = {};
  a_int ipntr[14] = {};
  iparam[0] = 1;  // exact shifts
  iparam[2] = options.max_iterations;
  iparam[6] = 1;  // standard eigenproblem, regular mode
  a_int ido = 0;
  a_int info = 1;  // use the provided starting vector

  while (true) {
    arpack::saupd(ido, arpack::bmat::identity, n, ritz, nev, options.tolerance,
                  resid.data(), ncv, v.data(), ldv, iparam, ipntr,
                  workd.data(), workl.data(), lworkl, info);
    if (ido == -1 || ido == 1) {
      Eigen::Map<const Eigen::VectorXd> x(workd.data() + ipntr[0] - 1, n);
      Eigen::Map<Eigen::VectorXd> y(workd.data() + ipntr[1] - 1, n);
      y.noalias() = m * x;
    } else {
      break;
    }
  }
  if (info < 0) {
    throw NumericalError("arpack saupd failed with info = " +
                         std::to_string(info));
  }
  const bool hit_cap = info == 1;

  std::vector<a_int> select(ncv);
  std::vector<double> d(nev);
  std::vector<double> z(static_cast<std::size_t>(n) * nev);
  a_int einfo = 0;
  arpack::seupd(1, arpack::howmny::ritz_vectors, select.data(), d.data(),
                z.data(), ldv, 0.0, arpack::bmat::identity, n, ritz, nev,
                options.tolerance, resid.data(), ncv, v.data(), ldv, iparam,
                ipntr, workd.data(), workl.data(), lworkl, einfo);
  if (einfo < 0) {
    throw NumericalError("arpack seupd failed with info = " +
                         std::to_string(einfo));
  }
  const a_int converged = iparam[4];

  Eigen::Map<Eigen::VectorXd> values(d.data(), nev);
  Eigen::Map<Eigen::MatrixXd> vectors(z.data(), n, nev);
  if (hit_cap || converged < nev) {
    std::vector<double> residuals;
    for (a_int j = 0; j < std::min(converged, nev); ++j) {
      residuals.push_back(
          (m * vectors.col(j) - values[j] * vectors.col(j)).norm());
    }
    throw NumericalError("arpack: " + std::to_string(converged) + " of " +
                             std::to_string(nev) +
                             " eigenpairs converged within " +
                             std::to_string(options.max_iterations) +
                             " iterations",
                         std::move(residuals));
  }

  std::vector<Eigen::Index> idx(nev);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return values[a] < values[b];
  });
  EigsResult out;
  out.eigenvalues.resize(nev);
  out.eigenvectors.resize(n, nev);
  for (a_int j = 0; j < nev; ++j) {
    out.eigenvalues[j] = values[idx[j]];
    out.eigenvectors.col(j) = vectors.col(idx[j]);
  }
  return out;
}

}  // namespace

EigsResult EigsSymmetric(const Eigen::SparseMatrix<double>& matrix, int count,
                         Which which, const EigsOptions& options) {
  if (matrix.rows() != matrix.cols()) throw DataError("eigs: matrix not square");
  CheckCount(matrix.rows(), count);
  // ARPACK needs nev < n and leaves little room for the Krylov basis when
  // count approaches n.
  if (matrix.rows() <= options.dense_threshold ||
      2 * count + 1 >= matrix.rows()) {
    return DenseEigs(Eigen::MatrixXd(matrix), count, which);
  }
  return ArpackEigs(matrix, count, which, options);
}

EigsResult EigsSymmetric(const Eigen::MatrixXd& matrix, int count,
                         Which which) {
  if (matrix.rows() != matrix.cols()) throw DataError("eigs: matrix not square");
  CheckCount(matrix.rows(), count);
  return DenseEigs(matrix, count, which);
}

}  // namespace seep
