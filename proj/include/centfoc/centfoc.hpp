#pragma once

#include "centfoc/errors.hpp"
#include "centfoc/job.hpp"
#include "centfoc/oracle.hpp"
#include "centfoc/profile.hpp"
#include "centfoc/quadrature.hpp"
#include "centfoc/retmap.hpp"
#include "centfoc/series.hpp"
#include "centfoc/system.hpp"
#include "centfoc/vsolver.hpp"
#include "centfoc/xifunction.hpp"
