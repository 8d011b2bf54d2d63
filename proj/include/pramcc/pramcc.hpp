#pragma once

#include "auxiliary.hpp"
#include "connectivity.hpp"
#include "context.hpp"
#include "densify.hpp"
#include "expand.hpp"
#include "forest.hpp"
#include "generators.hpp"
#include "instances.hpp"
#include "io.hpp"
#include "ledger.hpp"
#include "oracle.hpp"
#include "policy.hpp"
#include "primitives.hpp"
#include "profile.hpp"
#include "random.hpp"
#include "stage1.hpp"
#include "stage3.hpp"
#include "types.hpp"
