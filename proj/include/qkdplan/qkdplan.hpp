#pragma once

#include "qkdplan/errors.hpp"
#include "qkdplan/io.hpp"
#include "qkdplan/keypool.hpp"
#include "qkdplan/planner.hpp"
#include "qkdplan/policy.hpp"
#include "qkdplan/rskr.hpp"
#include "qkdplan/spectrum.hpp"
