#pragma once

// Umbrella header.

#include "wreathlab/group.hpp"
#include "wreathlab/wreath.hpp"
#include "wreathlab/thoma.hpp"
#include "wreathlab/fock.hpp"
#include "wreathlab/cosets.hpp"
#include "wreathlab/typeiii.hpp"
#include "wreathlab/sampling.hpp"
#include "wreathlab/json_io.hpp"
#include "wreathlab/checks.hpp"
#include "wreathlab/report.hpp"
