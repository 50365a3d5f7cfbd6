// Everything in one include.
#pragma once

#include "cachedof/errors.hpp"
#include "cachedof/rational.hpp"
#include "cachedof/rng.hpp"
#include "cachedof/prime_field.hpp"
#include "cachedof/subsets.hpp"
#include "cachedof/model.hpp"
#include "cachedof/dof_calc.hpp"
#include "cachedof/placement.hpp"
#include "cachedof/transmission.hpp"
#include "cachedof/full_csit.hpp"
#include "cachedof/delayed_csit.hpp"
#include "cachedof/mixed.hpp"
#include "cachedof/trace.hpp"
#include "cachedof/cli.hpp"
