#include "portarb/pipeline.hpp"

namespace portarb
{

Compilation compile(const BehaviorModel& model, const NetworkDescription& network,
                    bool auto_observe)
{
  Compilation result{validate(model, network, auto_observe), {}, {}};
  if (result.validation.has_errors())
    return result;
  result.rules = extract_rules(model, result.validation.network);
  BddManager bdd;
  result.conflicts = check_conflicts(result.rules, bdd);
  return result;
}

}  // namespace portarb
