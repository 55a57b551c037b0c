#pragma once

#include "descort/density.hpp"
#include "descort/error.hpp"
#include "descort/example.hpp"
#include "descort/json_io.hpp"
#include "descort/measures.hpp"
#include "descort/quadrature.hpp"
#include "descort/tail.hpp"
#include "descort/transforms.hpp"
#include "descort/ymap.hpp"
