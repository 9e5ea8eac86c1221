#pragma once

#include "wsnlife/core.hpp"
#include "wsnlife/deployment.hpp"
#include "wsnlife/propagation.hpp"
#include "wsnlife/coverage.hpp"
#include "wsnlife/construction.hpp"
#include "wsnlife/maintenance.hpp"
#include "wsnlife/engine.hpp"
#include "wsnlife/config.hpp"
#include "wsnlife/experiment.hpp"
