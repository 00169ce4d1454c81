#pragma once

#include "triq/analytic.hpp"
#include "triq/ddseq.hpp"
#include "triq/density.hpp"
#include "triq/errors.hpp"
#include "triq/linalg.hpp"
#include "triq/measures.hpp"
#include "triq/noise.hpp"
#include "triq/spin_system.hpp"
#include "triq/states.hpp"
#include "triq/tomo.hpp"
