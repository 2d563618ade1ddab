#pragma once

#include "errors.hpp"
#include "polynomial.hpp"
#include "quadrature.hpp"
#include "mesh.hpp"
#include "mesh_generators.hpp"
#include "mesh_io.hpp"
#include "decomposition.hpp"
#include "wg_space.hpp"
#include "lambda_basis.hpp"
#include "lifting.hpp"
#include "discretization.hpp"
#include "postprocess.hpp"
#include "wg_solver.hpp"
#include "study.hpp"
#include "config.hpp"
#include "cli.hpp"
