#include "claimeval/errors.h"

#include <fmt/format.h>

namespace claimeval {

ParseError::ParseError(std::string source, std::size_t line, const std::string& what)
    : DataError(fmt::format("{}:{}: {}", source, line, what)),
      source_(std::move(source)),
      line_(line) {}

IntegrityError::IntegrityError(const std::string& what, std::vector<std::string> offenders)
    : DataError(fmt::format("{}: {}", what, fmt::join(offenders, ", "))),
      offenders_(std::move(offenders)) {}

}  // namespace claimeval
