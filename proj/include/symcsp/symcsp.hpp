// SPDX-FileCopyrightText: © 2026 The symcsp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "symcsp/error.hpp"
#include "symcsp/rational.hpp"
#include "symcsp/gf2.hpp"
#include "symcsp/graph.hpp"
#include "symcsp/instances.hpp"
#include "symcsp/lift.hpp"
#include "symcsp/solvers.hpp"
#include "symcsp/io.hpp"
#include "symcsp/constructions.hpp"
#include "symcsp/game.hpp"
#include "symcsp/duplicators.hpp"
#include "symcsp/sdp.hpp"
