// Copyright 2026 The wqte Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WQTE_ERROR_HPP
#define WQTE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wqte {

/// Broad failure class; the CLI maps these onto process exit codes.
enum class ErrorCategory { kUsage, kData, kNumerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  [[nodiscard]] ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

#define WQTE_DEFINE_ERROR(Name, Category)                                    \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(Category, what) {}         \
  }

// Usage: bad arguments or configuration.
WQTE_DEFINE_ERROR(ArgumentError, ErrorCategory::kUsage);
WQTE_DEFINE_ERROR(UsageError, ErrorCategory::kUsage);

// Data: input files and schemas.
WQTE_DEFINE_ERROR(SchemaError, ErrorCategory::kData);
WQTE_DEFINE_ERROR(DomainError, ErrorCategory::kData);
WQTE_DEFINE_ERROR(IoError, ErrorCategory::kData);
WQTE_DEFINE_ERROR(DegenerateExposureError, ErrorCategory::kData);
WQTE_DEFINE_ERROR(BinningError, ErrorCategory::kData);
WQTE_DEFINE_ERROR(TiltingError, ErrorCategory::kData);

// Numerical: the estimation problem itself is ill-posed.
WQTE_DEFINE_ERROR(DegenerateWeightsError, ErrorCategory::kNumerical);
WQTE_DEFINE_ERROR(DegenerateArmError, ErrorCategory::kNumerical);
WQTE_DEFINE_ERROR(SingularDesignError, ErrorCategory::kNumerical);
WQTE_DEFINE_ERROR(SeparationError, ErrorCategory::kNumerical);
WQTE_DEFINE_ERROR(DegenerateVarianceError, ErrorCategory::kNumerical);
WQTE_DEFINE_ERROR(InversionError, ErrorCategory::kNumerical);
WQTE_DEFINE_ERROR(VarianceUndefinedError, ErrorCategory::kNumerical);
WQTE_DEFINE_ERROR(InstabilityError, ErrorCategory::kNumerical);
WQTE_DEFINE_ERROR(FactorizationError, ErrorCategory::kNumerical);

#undef WQTE_DEFINE_ERROR

/// Row-indexed parse failure while reading tabular input.
class ParseError : public Error {
 public:
  ParseError(std::size_t row, const std::string& what)
      : Error(ErrorCategory::kData,
              "row " + std::to_string(row) + ": " + what),
        row_(row) {}

  [[nodiscard]] std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

inline void require_tau(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) {
    throw ArgumentError("tau must lie in (0, 1), got " + std::to_string(tau));
  }
}

inline int exit_code(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::kUsage:
      return 2;
    case ErrorCategory::kData:
      return 3;
    case ErrorCategory::kNumerical:
      return 4;
  }
  return 1;
}

}  // namespace wqte

#endif  // WQTE_ERROR_HPP
