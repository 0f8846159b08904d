#pragma once

#include <stdexcept>
#include <string>

namespace om {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define OM_ERROR_TYPE(Name)                                              \
    struct Name : Error {                                                \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

OM_ERROR_TYPE(GroundMismatch);      // sign vectors from different ground sets mixed
OM_ERROR_TYPE(ParseError);          // malformed .sv / matrix / json input
OM_ERROR_TYPE(EmptySystem);         // operation needs a nonempty system
OM_ERROR_TYPE(NotGraded);           // cover heights inconsistent, rank undefined
OM_ERROR_TYPE(ElementNotFound);     // element id/name not in the ground set
OM_ERROR_TYPE(VectorNotInSystem);
OM_ERROR_TYPE(NotPartialCube);      // tope graph distance != Hamming distance
OM_ERROR_TYPE(UnrealizableSample);  // sample matches no tope / no convex set
OM_ERROR_TYPE(InvalidLocalization); // extension candidate fails the axioms
OM_ERROR_TYPE(NoCornerFound);
OM_ERROR_TYPE(NoPeelingFound);
OM_ERROR_TYPE(OrientationAmbiguous); // digraph arc orientation witness not unique
OM_ERROR_TYPE(EmptyPolyhedron);
OM_ERROR_TYPE(Unbounded);
OM_ERROR_TYPE(NoOptimum);           // in-degree-0 node missing: solver invariant broken
OM_ERROR_TYPE(NotGeneralPosition);
OM_ERROR_TYPE(SearchExhausted);     // corner map backtracking ran out of label sets
OM_ERROR_TYPE(ImageCollision);      // map constraint wants two labels for one set
OM_ERROR_TYPE(UnknownImage);        // decompression met a label set it cannot invert
OM_ERROR_TYPE(UnknownKey);          // lookup in a map/table missed
OM_ERROR_TYPE(DegenerateInput);     // matrix rank too low, duplicate points, ...
OM_ERROR_TYPE(RecoveryFailed);      // covectors_from_topes output fails the axioms

#undef OM_ERROR_TYPE

} // namespace om
