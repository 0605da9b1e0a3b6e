#pragma once

#include "errors.hpp"
#include "lie_core.hpp"
#include "tv_space.hpp"
#include "prolongation.hpp"
#include "rep_algebra.hpp"
#include "catalog.hpp"
#include "descriptor.hpp"
#include "suites.hpp"
#include "report_io.hpp"
