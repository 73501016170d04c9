#ifndef DCX_DCX_HPP
#define DCX_DCX_HPP

#include "dcx/workspace.hpp"

#endif
