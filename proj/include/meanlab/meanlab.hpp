#pragma once

#include "meanlab/classify.hpp"
#include "meanlab/config.hpp"
#include "meanlab/correspondence.hpp"
#include "meanlab/density.hpp"
#include "meanlab/dsl.hpp"
#include "meanlab/entropy.hpp"
#include "meanlab/error.hpp"
#include "meanlab/group.hpp"
#include "meanlab/independence.hpp"
#include "meanlab/meanmetric.hpp"
#include "meanlab/rational.hpp"
#include "meanlab/report.hpp"
#include "meanlab/rotation.hpp"
#include "meanlab/subset.hpp"
#include "meanlab/subshift.hpp"
#include "meanlab/verify.hpp"
