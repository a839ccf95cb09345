#pragma once

#include "lyap/error.hpp"
#include "lyap/instance.hpp"
#include "lyap/path.hpp"
#include "lyap/clusters.hpp"
#include "lyap/isotonic.hpp"
#include "lyap/variational.hpp"
#include "lyap/closed_form.hpp"
#include "lyap/quadrature.hpp"
#include "lyap/generator.hpp"
#include "lyap/verify.hpp"
