#pragma once

#include "cvsym/covariance.hpp"
#include "cvsym/entanglement.hpp"
#include "cvsym/errors.hpp"
#include "cvsym/ghz.hpp"
#include "cvsym/io.hpp"
#include "cvsym/symmetric_states.hpp"
#include "cvsym/verification.hpp"
