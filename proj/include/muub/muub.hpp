#pragma once

#include "muub/linalg.hpp"
#include "muub/rng.hpp"
#include "muub/pauli.hpp"
#include "muub/basis.hpp"
#include "muub/search.hpp"
#include "muub/state_iso.hpp"
#include "muub/qkd.hpp"
#include "muub/json_io.hpp"
#include "muub/acceptance.hpp"
