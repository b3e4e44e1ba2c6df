#ifndef GMAPPER_GMAPPER_HPP
#define GMAPPER_GMAPPER_HPP

// Umbrella header for the library.

#include "error.hpp"
#include "stats.hpp"
#include "gmm.hpp"
#include "point_cloud.hpp"
#include "cover.hpp"
#include "clustering.hpp"
#include "mapper.hpp"
#include "data.hpp"
#include "graph_io.hpp"
#include "app.hpp"

#endif  // GMAPPER_GMAPPER_HPP
