#pragma once

#include "walker/canonical.hpp"
#include "walker/elements.hpp"
#include "walker/error.hpp"
#include "walker/filtration.hpp"
#include "walker/homlift.hpp"
#include "walker/linalg.hpp"
#include "walker/module.hpp"
#include "walker/ordinal.hpp"
#include "walker/presentation.hpp"
#include "walker/purity.hpp"
