#pragma once

#include <string_view>

// Small hand-written models shared across the test suites.
namespace failprop::tests {

// Two-function series chain with pass-through transfers.
inline constexpr std::string_view kSeriesChain = R"(
model series_chain
values { v0 v1 }

function F {
  out oF
  transfer oF.status = {
    status = OK => OK
    status = Lost => Lost
    else Err
  }
}

function G {
  in iG
  out oG
  transfer oG.status = {
    status = OK => iG.status
    status = Lost => Lost
    else Err
  }
}

flow oF -> iG
)";

// Unanchored feedback loop: o = i both ways; any status is consistent.
inline constexpr std::string_view kFreeLoop = R"(
model free_loop
values { v0 }

function Loop {
  in iLoop
  out oLoop
  transfer oLoop.status = iLoop.status
}

flow oLoop -> iLoop
)";

// Feedback loop with two consistent statuses (OK and Lost).
inline constexpr std::string_view kTwoPointLoop = R"(
model two_point_loop
values { v0 }

function Loop {
  in iLoop
  out oLoop
  transfer oLoop.status = {
    iLoop.status = OK => OK
    else Lost
  }
}

flow oLoop -> iLoop
)";

// Feedback loop with no consistent status at all.
inline constexpr std::string_view kContradictoryLoop = R"(
model contradictory_loop
values { v0 }

function Loop {
  in iLoop
  out oLoop
  transfer oLoop.status = {
    iLoop.status = OK => Err
    iLoop.status = Err => Lost
    else OK
  }
}

flow oLoop -> iLoop
)";

} // namespace failprop::tests
