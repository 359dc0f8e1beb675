#pragma once

// Umbrella include: the whole library in one header.

#include "infppl/infnum.hpp"
#include "infppl/random.hpp"
#include "infppl/distributions.hpp"
#include "infppl/measure.hpp"
#include "infppl/transform.hpp"
#include "infppl/engine.hpp"
#include "infppl/corpus.hpp"
