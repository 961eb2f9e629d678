#pragma once

#include "rootsum/analysis.hpp"
#include "rootsum/errors.hpp"
#include "rootsum/exact.hpp"
#include "rootsum/float.hpp"
#include "rootsum/hp.hpp"
#include "rootsum/oracle.hpp"
#include "rootsum/series.hpp"
