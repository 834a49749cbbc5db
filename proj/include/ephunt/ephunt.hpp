#pragma once

// Umbrella header.

#include "ephunt/biortho.hpp"
#include "ephunt/errors.hpp"
#include "ephunt/family.hpp"
#include "ephunt/fidelity.hpp"
#include "ephunt/io.hpp"
#include "ephunt/linalg.hpp"
#include "ephunt/metric.hpp"
#include "ephunt/models.hpp"
#include "ephunt/sweep.hpp"
#include "ephunt/verify.hpp"
