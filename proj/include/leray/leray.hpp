#pragma once

#include "leray/error.hpp"
#include "leray/numerics.hpp"
#include "leray/profile.hpp"
#include "leray/domain.hpp"
#include "leray/measure.hpp"
#include "leray/operator.hpp"
#include "leray/spectrum.hpp"
#include "leray/duality.hpp"
#include "leray/spec_io.hpp"
