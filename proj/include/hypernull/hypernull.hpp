#pragma once

#include "hypernull/errors.hpp"
#include "hypernull/hypergraph.hpp"
#include "hypernull/random.hpp"
#include "hypernull/json_io.hpp"
#include "hypernull/sampling.hpp"
#include "hypernull/oracle.hpp"
#include "hypernull/metrics.hpp"
#include "hypernull/ingest.hpp"
#include "hypernull/harness.hpp"

namespace hypernull {
inline constexpr const char* version = "0.1.0";
}
