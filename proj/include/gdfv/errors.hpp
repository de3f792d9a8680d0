#pragma once

#include <stdexcept>
#include <string>

namespace gdfv {

/// Thrown when a preprocessing structure would exceed its memory budget.
/// Builds either complete in full or refuse; no partially built structure
/// is ever returned.
class BudgetError : public std::runtime_error {
  public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gdfv
