#pragma once

#include "robound/bayes.hpp"
#include "robound/classifiers.hpp"
#include "robound/convolution.hpp"
#include "robound/distributions.hpp"
#include "robound/error.hpp"
#include "robound/evaluation.hpp"
#include "robound/geometry.hpp"
#include "robound/grid.hpp"
#include "robound/io.hpp"
#include "robound/kernels.hpp"
#include "robound/rng.hpp"
#include "robound/svg.hpp"
