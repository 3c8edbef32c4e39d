#pragma once

#include <memory>

#include "dispatchsim/actions.hpp"
#include "dispatchsim/network.hpp"
#include "dispatchsim/rng.hpp"
#include "dispatchsim/state.hpp"

namespace dispatchsim {

// A dispatching/relocation rule. decide() must return a member of
// enumerate_actions(s, net). Implementations may keep internal scratch, so a
// policy instance is not shareable across threads; concurrent replications
// clone one each.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action decide(const SystemState& s, const Network& net,
                        RngStream& rng) = 0;
  virtual std::unique_ptr<Policy> clone() const = 0;
  virtual const char* name() const = 0;
};

}  // namespace dispatchsim
