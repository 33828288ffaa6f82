#pragma once

#include <vector>

#include "chor/network.hpp"
#include "chor/semantics.hpp"

namespace chor {

struct NetTransition {
  StepLabel label;
  Network target;
};

// Synchronous steps: Com for every sender/receiver pair whose heads match,
// Then/Else for every process whose head is a conditional. Heads are exposed
// through definitions, unfolding each call at most once. NonEmptyQueue if a
// queue is not empty.
std::vector<NetTransition> enabled_sp(const Network& n);

// Asynchronous steps: ComS whenever a send is exposed and its recipient is
// present, ComR whenever the receiver's lane for the sender is non-empty.
std::vector<NetTransition> enabled_asp(const Network& n);

std::vector<NetTransition> enabled_net(const Network& n, Mode mode);

// Normalizes behaviours and drops processes that have terminated with an
// empty queue. Idempotent.
Network normalize_network(const Network& n);

// Same network with an empty queue at every process (queues of the
// representation are already empty in SP networks).
Network lift_to_async(const Network& n);

enum class NetStatus : std::uint8_t { Terminated, OrphanedMessages, Deadlocked, Running };

const char* status_name(NetStatus s);

NetStatus classify(const Network& n, Mode mode);

}  // namespace chor
