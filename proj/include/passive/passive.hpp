// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "passive/activation.hpp"
#include "passive/core.hpp"
#include "passive/cycle.hpp"
#include "passive/engine.hpp"
#include "passive/oracle.hpp"
#include "passive/quasistatic.hpp"
#include "passive/reduction.hpp"
#include "passive/regions.hpp"
#include "passive/states.hpp"
