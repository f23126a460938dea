#pragma once

/// Umbrella header.

#include "ultraglab/asymptotics.hpp"
#include "ultraglab/builtins.hpp"
#include "ultraglab/embed.hpp"
#include "ultraglab/gevrey.hpp"
#include "ultraglab/grid.hpp"
#include "ultraglab/io.hpp"
#include "ultraglab/microlocal.hpp"
#include "ultraglab/net.hpp"
#include "ultraglab/scenario.hpp"
#include "ultraglab/selftest.hpp"
#include "ultraglab/spectral.hpp"
