#ifndef WOAH_WOAH_HPP
#define WOAH_WOAH_HPP

// WOAH: estimates an intent/entity ontology for conversational agents from
// a dependency-parsed dialogue corpus, with a configurable level of
// generalization.

#include "woah/corpus.hpp"
#include "woah/embedding.hpp"
#include "woah/errors.hpp"
#include "woah/export_eval.hpp"
#include "woah/extraction.hpp"
#include "woah/format.hpp"
#include "woah/selection.hpp"
#include "woah/typing.hpp"
#include "woah/weighting.hpp"

#define WOAH_VERSION "0.1.0"

#endif  // WOAH_WOAH_HPP
