#pragma once

#include <stdexcept>
#include <string>

namespace toract {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shape mismatch: non-square input, incompatible block sizes, wrong vector length.
struct dimension_error : error {
  using error::error;
};

// Input outside the mathematical domain of the operation (zero seed, d = 0, ...).
struct domain_error : error {
  using error::error;
};

// A stated precondition fails (non-primitive vector, non-unimodular matrix, ...).
struct precondition_error : error {
  using error::error;
};

// Element does not lie in the required subgroup.
struct membership_error : error {
  using error::error;
};

// A theorem-level hypothesis is violated (n < 2, n < 3 for the affine family).
struct hypothesis_error : error {
  using error::error;
};

// The operation is only defined at desk scale / small parameters.
struct out_of_scope_error : error {
  using error::error;
};

// Internal consistency check failed; indicates corrupted input data.
struct inconsistency_error : error {
  using error::error;
};

}  // namespace toract
