#pragma once

#include "inertia/estimators/common.hpp"
#include "inertia/estimators/inoue.hpp"
#include "inertia/estimators/regression.hpp"
#include "inertia/estimators/rocof.hpp"
#include "inertia/estimators/tuttelberg.hpp"
#include "inertia/estimators/wall.hpp"
#include "inertia/estimators/zografos_r.hpp"
