# src/groups/generators.py
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from src.algebra.ring_core import Ring, RingElem
from src.utils.errors import MalformedCertificateError, RingSpecError


@dataclass(frozen=True)
class ElemGen:
    """
    Symbolic elementary generator.

    ``kind == "S"``: short root T_ij(x).
    ``kind == "E"``: extra short root T_i(x) (orthogonal, ``y is None``)
    or T_i(x, y) (unitary).
    """

    kind: str
    i: int
    j: Optional[int]
    x: RingElem
    y: Optional[RingElem] = None

    @classmethod
    def short(cls, i: int, j: int, x: RingElem) -> "ElemGen":
        return cls("S", i, j, x)

    @classmethod
    def extra(cls, i: int, x: RingElem, y: Optional[RingElem] = None) -> "ElemGen":
        return cls("E", i, None, x, y)

    def to_json(self, ring: Ring) -> dict:
        if self.kind == "S":
            return {"g": "S", "i": self.i, "j": self.j, "x": ring.encode(self.x)}
        out = {"g": "E", "i": self.i, "x": ring.encode(self.x)}
        if self.y is not None:
            out["y"] = ring.encode(self.y)
        return out

    @classmethod
    def from_json(cls, obj: dict, ring: Ring) -> "ElemGen":
        try:
            g = obj["g"]
            i = obj["i"]
            if not isinstance(i, int) or isinstance(i, bool):
                raise MalformedCertificateError(f"bad index in {obj!r}")
            x = ring.decode(obj["x"])
            if g == "S":
                j = obj["j"]
                if not isinstance(j, int) or isinstance(j, bool) or set(obj) != {"g", "i", "j", "x"}:
                    raise MalformedCertificateError(f"bad short root {obj!r}")
                return cls.short(i, j, x)
            if g == "E":
                if set(obj) - {"g", "i", "x", "y"}:
                    raise MalformedCertificateError(f"bad extra short root {obj!r}")
                y = ring.decode(obj["y"]) if "y" in obj else None
                return cls.extra(i, x, y)
        except (KeyError, TypeError, RingSpecError) as exc:
            raise MalformedCertificateError(f"bad generator {obj!r}") from exc
        raise MalformedCertificateError(f"unknown generator tag in {obj!r}")

    def __str__(self) -> str:
        if self.kind == "S":
            return f"T[{self.i},{self.j}]({self.x})"
        if self.y is None:
            return f"T[{self.i}]({self.x})"
        return f"T[{self.i}]({self.x},{self.y})"


Word = Tuple[ElemGen, ...]


def word_str(word: Sequence[ElemGen]) -> str:
    return " ".join(str(g) for g in word) or "e"
