#pragma once

#include "fkm/abelian.hpp"
#include "fkm/abelian_group.hpp"
#include "fkm/classifier.hpp"
#include "fkm/cohomology.hpp"
#include "fkm/crystal.hpp"
#include "fkm/int_matrix.hpp"
#include "fkm/linear_solve.hpp"
#include "fkm/matrix_group.hpp"
#include "fkm/numeric.hpp"
#include "fkm/smith.hpp"
#include "fkm/torus.hpp"
#include "fkm/torus_h1.hpp"
