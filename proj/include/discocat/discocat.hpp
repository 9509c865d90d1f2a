#pragma once

#include "discocat/encoding.hpp"
#include "discocat/error.hpp"
#include "discocat/knowledge_base.hpp"
#include "discocat/matrix.hpp"
#include "discocat/query_compiler.hpp"
#include "discocat/questions.hpp"
#include "discocat/resolution.hpp"
#include "discocat/semantics.hpp"
#include "discocat/semiring.hpp"
