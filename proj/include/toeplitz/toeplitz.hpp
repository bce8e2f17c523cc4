#pragma once

#include "toeplitz/multiindex.hpp"
#include "toeplitz/specfun.hpp"
#include "toeplitz/quadrature.hpp"
#include "toeplitz/symbol.hpp"
#include "toeplitz/classify.hpp"
#include "toeplitz/library.hpp"
#include "toeplitz/spectral.hpp"
#include "toeplitz/verify.hpp"
#include "toeplitz/table_io.hpp"
