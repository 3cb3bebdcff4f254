#pragma once

// Umbrella header: the full safety-requirements traceability toolkit.

#include "tracekit/diagnostics.hpp"
#include "tracekit/dot.hpp"
#include "tracekit/graph.hpp"
#include "tracekit/impact.hpp"
#include "tracekit/lexer.hpp"
#include "tracekit/model.hpp"
#include "tracekit/parser.hpp"
#include "tracekit/printer.hpp"
#include "tracekit/report.hpp"
#include "tracekit/resolver.hpp"
#include "tracekit/result.hpp"
#include "tracekit/rules.hpp"
