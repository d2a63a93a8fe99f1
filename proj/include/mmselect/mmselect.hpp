#pragma once

#include "mmselect/element.hpp"
#include "mmselect/primitives.hpp"
#include "mmselect/random.hpp"
#include "mmselect/trace.hpp"
#include "mmselect/algorithms.hpp"
#include "mmselect/bounds.hpp"
#include "mmselect/generators.hpp"
#include "mmselect/experiments.hpp"
#include "mmselect/verify.hpp"
