#pragma once

// Rotated boxes as Gaussian distributions: distribution-distance regression
// losses, analytic gradients, exact SkewIoU, Gaussian-metric label
// assignment, and 3-D heading post-processing.

#include "gbox/angles.hpp"
#include "gbox/assign.hpp"
#include "gbox/box.hpp"
#include "gbox/divergence.hpp"
#include "gbox/errors.hpp"
#include "gbox/fit.hpp"
#include "gbox/gradient.hpp"
#include "gbox/heading.hpp"
#include "gbox/io.hpp"
#include "gbox/linalg.hpp"
#include "gbox/loss.hpp"
#include "gbox/offsets.hpp"
#include "gbox/polygon.hpp"
#include "gbox/sweep.hpp"
