#include "tivreg/bnb.hpp"

namespace tivreg {

std::string_view to_string(SearchStatus status) {
  switch (status) {
    case SearchStatus::Optimal: return "optimal";
    case SearchStatus::BestEffort: return "best_effort";
  }
  return "unknown";
}

}  // namespace tivreg
