#ifndef XFEM_XFEM_HPP
#define XFEM_XFEM_HPP

#include "xfem/assembly.hpp"
#include "xfem/cut_quadrature.hpp"
#include "xfem/disk_mesh.hpp"
#include "xfem/driver.hpp"
#include "xfem/enriched_space.hpp"
#include "xfem/error.hpp"
#include "xfem/gauss.hpp"
#include "xfem/level_set.hpp"
#include "xfem/params.hpp"
#include "xfem/postprocess.hpp"
#include "xfem/problems.hpp"
#include "xfem/solver.hpp"
#include "xfem/sparse.hpp"
#include "xfem/vec2.hpp"

#endif // XFEM_XFEM_HPP
