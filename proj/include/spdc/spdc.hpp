#pragma once

#include "spdc/classical.hpp"
#include "spdc/commands.hpp"
#include "spdc/config.hpp"
#include "spdc/filters.hpp"
#include "spdc/materials.hpp"
#include "spdc/modebasis.hpp"
#include "spdc/optimizer.hpp"
#include "spdc/overlap.hpp"
#include "spdc/pipeline.hpp"
#include "spdc/quadrature.hpp"
#include "spdc/quantities.hpp"
#include "spdc/quantum.hpp"
#include "spdc/report.hpp"
#include "spdc/units.hpp"
#include "spdc/validation.hpp"
