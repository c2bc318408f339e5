#pragma once

// Confidence-distribution inference for the norm of a Gaussian mean with
// known noise scale, plus the competing uniform-prior / reference posteriors,
// GFD sampling, CI procedures, consonant beliefs and the Monte Carlo lab.

#include "confdist/belief.hpp"
#include "confdist/confidence.hpp"
#include "confdist/intervals.hpp"
#include "confdist/mc.hpp"
#include "confdist/model.hpp"
#include "confdist/numerics.hpp"
#include "confdist/posterior.hpp"
#include "confdist/random.hpp"
#include "confdist/special.hpp"
