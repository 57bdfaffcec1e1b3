#pragma once

// Canonical forms of squared-normal matrices under unitary and orthogonal
// similarity: block types, the coupled-block bijection, canonicalizers for
// the two complex forms and the real form, similarity oracles, seeded
// generators, and file I/O.

#include "sqn/bijection.hpp"
#include "sqn/canon_complex.hpp"
#include "sqn/canon_real.hpp"
#include "sqn/canonical_form.hpp"
#include "sqn/generators.hpp"
#include "sqn/linalg.hpp"
#include "sqn/normality.hpp"
#include "sqn/oracle.hpp"
#include "sqn/serialize.hpp"
#include "sqn/spectral.hpp"
#include "sqn/types.hpp"
