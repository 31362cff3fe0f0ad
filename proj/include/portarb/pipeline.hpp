#ifndef PORTARB_PIPELINE_HPP_
#define PORTARB_PIPELINE_HPP_

#include <vector>

#include "portarb/compiler.hpp"
#include "portarb/model.hpp"
#include "portarb/validate.hpp"

namespace portarb
{

/// Everything after parsing: validate, extract rules, check conflicts.
struct Compilation
{
  Validation validation;
  RuleSet rules;                         // empty when validation failed
  std::vector<Diagnostic> conflicts;     // empty when validation failed

  bool ok() const { return !validation.has_errors(); }
  bool has_warnings() const { return validation.has_warnings() || !conflicts.empty(); }
};

Compilation compile(const BehaviorModel& model, const NetworkDescription& network,
                    bool auto_observe);

}  // namespace portarb

#endif  // PORTARB_PIPELINE_HPP_
