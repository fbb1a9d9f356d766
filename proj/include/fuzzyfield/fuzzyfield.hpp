#pragma once

// Umbrella header.

#include "fuzzyfield/catalog.hpp"
#include "fuzzyfield/complex_field.hpp"
#include "fuzzyfield/errors.hpp"
#include "fuzzyfield/experiment_io.hpp"
#include "fuzzyfield/forms.hpp"
#include "fuzzyfield/identity_report.hpp"
#include "fuzzyfield/identity_sweep.hpp"
#include "fuzzyfield/membership.hpp"
#include "fuzzyfield/mu_spec.hpp"
#include "fuzzyfield/real_field.hpp"
#include "fuzzyfield/sequences.hpp"
