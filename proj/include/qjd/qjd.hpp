#pragma once

#include "qjd/dialgebra.hpp"
#include "qjd/error.hpp"
#include "qjd/expansion.hpp"
#include "qjd/fp_linalg.hpp"
#include "qjd/free_magma.hpp"
#include "qjd/glennie.hpp"
#include "qjd/identity_engine.hpp"
#include "qjd/identity_io.hpp"
#include "qjd/linear_combination.hpp"
#include "qjd/special.hpp"
#include "qjd/symrep.hpp"
