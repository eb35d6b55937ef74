#pragma once

#include "mvdyn/algebra.hpp"
#include "mvdyn/deciders.hpp"
#include "mvdyn/elimination.hpp"
#include "mvdyn/error.hpp"
#include "mvdyn/fock.hpp"
#include "mvdyn/fock_checks.hpp"
#include "mvdyn/intertwiner.hpp"
#include "mvdyn/io.hpp"
#include "mvdyn/matching.hpp"
#include "mvdyn/random.hpp"
#include "mvdyn/spectrum.hpp"
#include "mvdyn/tolerance.hpp"
