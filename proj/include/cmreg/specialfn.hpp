#pragma once

#include "cmreg/specialfn/gamma.hpp"
#include "cmreg/specialfn/hyp2f1.hpp"
#include "cmreg/specialfn/integral.hpp"
#include "cmreg/specialfn/series.hpp"
