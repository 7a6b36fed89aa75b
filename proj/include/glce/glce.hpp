#ifndef GLCE_GLCE_HPP
#define GLCE_GLCE_HPP

#include "glce/error.hpp"
#include "glce/slp.hpp"
#include "glce/repair.hpp"
#include "glce/generators.hpp"
#include "glce/grammar_io.hpp"
#include "glce/weighted_grammar.hpp"
#include "glce/restructure.hpp"
#include "glce/block_index.hpp"
#include "glce/diffcover.hpp"
#include "glce/lce_core.hpp"
#include "glce/lce_index.hpp"
#include "glce/index_file.hpp"

#endif
