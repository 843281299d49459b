"""Exception types raised by markedkh."""


class MarkedKhError(Exception):
    """Base class for every error raised by this package."""

    code = "error"

    def to_json(self):
        return {"error": self.code, "message": str(self)}


def _make(name, code, base=MarkedKhError, doc=None):
    cls = type(name, (base,), {"code": code, "__doc__": doc})
    return cls


MalformedInput = _make("MalformedInput", "malformed_input", doc="Input does not describe a valid PD diagram.")
EmptyDiagram = _make("EmptyDiagram", "empty_diagram", doc="Zero crossings and zero crossing-free circles.")
NoUnderCrossing = _make("NoUnderCrossing", "no_under_crossing", doc="An odd component never passes under.")
CubeTooLarge = _make("CubeTooLarge", "cube_too_large", doc="Cube dimension exceeds the configured bound.")
NotAComplex = _make("NotAComplex", "not_a_complex", doc="A differential does not square to zero.")
BasepointOnOmega = _make("BasepointOnOmega", "basepoint_on_omega", doc="The basepoint edge carries an odd number of endpoints.")
SameComponent = _make("SameComponent", "same_component", doc="The crossing joins a component to itself.")
ChainMapFailure = _make("ChainMapFailure", "chain_map_failure", doc="A map failed to commute with differentials.")
SplitFailure = _make("SplitFailure", "split_failure", doc="The D/E/F decomposition could not be verified.")
NotAdjacent = _make("NotAdjacent", "not_adjacent", doc="Two dropped crossings do not bound a clean bigon.")
SameSign = _make("SameSign", "same_sign", doc="Two dropped crossings have the same sign.")
NoDroppedCrossing = _make("NoDroppedCrossing", "no_dropped_crossing", doc="The operation needs a dropped crossing.")
NonTrivialVertex = _make("NonTrivialVertex", "non_trivial_vertex", doc="The marking is not trivial at this vertex.")
OrderViolation = _make("OrderViolation", "order_violation", doc="A differential lowers the q filtration.")
SplitUnknot = _make("SplitUnknot", "split_unknot", doc="The diagram has a crossing-free component.")
DetZero = _make("DetZero", "det_zero", doc="The determinant vanishes.")
TooLarge = _make("TooLarge", "too_large", doc="Enumeration bound exceeded.")
NotAKnot = _make("NotAKnot", "not_a_knot", doc="The diagram has more than one component.")

__all__ = [
    "MarkedKhError", "MalformedInput", "EmptyDiagram", "NoUnderCrossing", "CubeTooLarge",
    "NotAComplex", "BasepointOnOmega", "SameComponent", "ChainMapFailure", "SplitFailure",
    "NotAdjacent", "SameSign", "NoDroppedCrossing", "NonTrivialVertex", "OrderViolation",
    "SplitUnknot", "DetZero", "TooLarge", "NotAKnot",
]
