#ifndef PORTARB_VALIDATE_HPP_
#define PORTARB_VALIDATE_HPP_

#include <vector>

#include "portarb/model.hpp"

namespace portarb
{

struct Validation
{
  /// Sorted by location (behavior name), then code.
  std::vector<Diagnostic> diagnostics;
  /// The input network plus any observer connections added by auto_observe.
  NetworkDescription network;

  bool has_errors() const;
  bool has_warnings() const;
};

/// Structural checks of a behavior model against a network:
///
///  V1  inhibitions only target siblings (top-level nodes are siblings)
///  V2  every configured connection exists in the network
///  V3  every literal a behavior's rules will test (inherited condition
///      literals and inhibitor sources) is observable at each of its
///      destination ports; with `auto_observe` the missing observer
///      connections are added and reported as warnings
///  V4  the inhibition relation among siblings is acyclic
///  V5  every inhibition name resolves
///
/// Never throws for model problems; all findings are diagnostics.
Validation validate(const BehaviorModel& model, const NetworkDescription& network,
                    bool auto_observe);

}  // namespace portarb

#endif  // PORTARB_VALIDATE_HPP_
