#ifndef SEEP_ERRORS_H_
#define SEEP_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace seep {

// Malformed or out-of-contract input (bad ids, negative weights, size
// mismatches, infeasible model parameters).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A model parameterization that cannot be realized, e.g. an SNR that would
// require negative between-group connection probabilities.
class InfeasibleError : public DataError {
 public:
  using DataError::DataError;
};

// Iterative numerics that failed to converge.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::vector<double> residuals = {})
      : std::runtime_error(what), residuals_(std::move(residuals)) {}

  const std::vector<double>& residuals() const { return residuals_; }

 private:
  std::vector<double> residuals_;
};

}  // namespace seep

#endif  // SEEP_ERRORS_H_
