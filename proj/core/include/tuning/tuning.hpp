#pragma once

#include "tuning/chain.hpp"
#include "tuning/errors.hpp"
#include "tuning/functional.hpp"
#include "tuning/model.hpp"
#include "tuning/optimizer.hpp"
#include "tuning/parallel.hpp"
#include "tuning/random.hpp"
#include "tuning/simulator.hpp"
