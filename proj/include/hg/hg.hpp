// Umbrella header. Everything except the HTTP binding, which pulls in httplib.
#pragma once

#include "hg/ast.hpp"
#include "hg/catalog.hpp"
#include "hg/detector.hpp"
#include "hg/error.hpp"
#include "hg/lexer.hpp"
#include "hg/merge.hpp"
#include "hg/parser.hpp"
#include "hg/printer.hpp"
#include "hg/rules.hpp"
#include "hg/service.hpp"
#include "hg/session.hpp"
#include "hg/solver.hpp"
#include "hg/symex.hpp"
#include "hg/term.hpp"
#include "hg/validate.hpp"
