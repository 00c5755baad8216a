#pragma once

#include "maryland/errors.hpp"
#include "maryland/hill.hpp"
#include "maryland/lattice_green.hpp"
#include "maryland/model.hpp"
#include "maryland/potential.hpp"
#include "maryland/spectrum.hpp"
#include "maryland/surface_weyl.hpp"
