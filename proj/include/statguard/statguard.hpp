#pragma once

#include "statguard/constraint.hpp"
#include "statguard/dataset.hpp"
#include "statguard/drilldown.hpp"
#include "statguard/errorsim.hpp"
#include "statguard/evalharness.hpp"
#include "statguard/hypotest.hpp"
#include "statguard/inference.hpp"
#include "statguard/ranktree.hpp"
#include "statguard/report.hpp"
#include "statguard/special.hpp"
