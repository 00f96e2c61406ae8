#pragma once

// Umbrella header.

#include "pswave/bounds.hpp"
#include "pswave/charpoly.hpp"
#include "pswave/error.hpp"
#include "pswave/funcspace.hpp"
#include "pswave/greenkernel.hpp"
#include "pswave/iterate.hpp"
#include "pswave/pdecheck.hpp"
#include "pswave/waveop.hpp"
