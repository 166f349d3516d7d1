"""
Golden data for the eleven real deformation classes.

Each record carries the real locus topology, its Smith type, the root type of
the minus eigenlattice inside K-perp, the arrangement code of the branch
sextic on the cone, the expected line counts and the Bertini partner. The
T2-series classes, RP2 and the two D4 classes are realized by parabolic
subdiagrams of E8 (Bourbaki indices); the S2-series classes are the Bertini
duals of their partners.
"""

import re
from dataclasses import dataclass

from shared.models import DeformationClass

# Bump when any value below changes.
CATALOG_VERSION = "1.0.0"

CLASS_RECORDS: tuple[DeformationClass, ...] = (
    DeformationClass(
        label="RP2+4T2", topology="RP2#4T2", smith_type="M", eigen_type="E8",
        arrangement="<4|0>", expected_lines=240, expected_h=128, expected_e=112,
        expected_h1_dim=9, components=1, bertini_partner="RP2+4S2",
    ),
    DeformationClass(
        label="RP2+3T2", topology="RP2#3T2", smith_type="M-1", eigen_type="E7",
        arrangement="<3|0>", expected_lines=126, expected_h=70, expected_e=56,
        expected_h1_dim=7, components=1, bertini_partner="RP2+3S2",
    ),
    DeformationClass(
        label="RP2+2T2", topology="RP2#2T2", smith_type="M-2", eigen_type="D6",
        arrangement="<2|0>", expected_lines=60, expected_h=36, expected_e=24,
        expected_h1_dim=5, components=1, bertini_partner="RP2+2S2",
    ),
    DeformationClass(
        label="RP2+1T2", topology="RP2#T2", smith_type="M-3", eigen_type="D4+A1",
        arrangement="<1|0>", expected_lines=26, expected_h=18, expected_e=8,
        expected_h1_dim=3, components=1, bertini_partner="RP2+1S2",
    ),
    DeformationClass(
        label="RP2", topology="RP2", smith_type="M-4", eigen_type="4A1",
        arrangement="<0|0>", expected_lines=8, expected_h=8, expected_e=0,
        expected_h1_dim=1, components=1, bertini_partner="RP2",
    ),
    DeformationClass(
        label="RP2+Klein", topology="RP2⊔K", smith_type="(M-2)Ia", eigen_type="D4",
        arrangement="<|||>", expected_lines=24, expected_h=16, expected_e=8,
        expected_h1_dim=3, components=2, bertini_partner="RP2+Klein",
    ),
    DeformationClass(
        label="RP2+T2+S2", topology="(RP2#T2)⊔S2", smith_type="(M-2)Ib", eigen_type="D4",
        arrangement="<1|1>", expected_lines=24, expected_h=16, expected_e=8,
        expected_h1_dim=3, components=2, bertini_partner="RP2+T2+S2",
    ),
    DeformationClass(
        label="RP2+4S2", topology="RP2⊔4S2", smith_type="M", eigen_type="0",
        arrangement="<4|0>", expected_lines=0, expected_h=0, expected_e=0,
        expected_h1_dim=1, components=5, bertini_partner="RP2+4T2",
    ),
    DeformationClass(
        label="RP2+3S2", topology="RP2⊔3S2", smith_type="M-1", eigen_type="A1",
        arrangement="<3|0>", expected_lines=2, expected_h=2, expected_e=0,
        expected_h1_dim=1, components=4, bertini_partner="RP2+3T2",
    ),
    DeformationClass(
        label="RP2+2S2", topology="RP2⊔2S2", smith_type="M-2", eigen_type="2A1",
        arrangement="<2|0>", expected_lines=4, expected_h=4, expected_e=0,
        expected_h1_dim=1, components=3, bertini_partner="RP2+2T2",
    ),
    DeformationClass(
        label="RP2+1S2", topology="RP2⊔S2", smith_type="M-3", eigen_type="3A1",
        arrangement="<1|0>", expected_lines=6, expected_h=6, expected_e=0,
        expected_h1_dim=1, components=2, bertini_partner="RP2+1T2",
    ),
)

# Bourbaki indices of the E8 subdiagram whose span is the minus eigenlattice.
WITNESSES: dict[str, tuple[int, ...]] = {
    "RP2+4T2": (1, 2, 3, 4, 5, 6, 7, 8),
    "RP2+3T2": (1, 2, 3, 4, 5, 6, 7),
    "RP2+2T2": (2, 3, 4, 5, 6, 7),
    "RP2+1T2": (2, 3, 4, 5, 7),
    "RP2": (1, 4, 6, 8),
    "RP2+Klein": (2, 3, 4, 5),
    "RP2+T2+S2": (2, 3, 4, 5),
}

# The S2-series classes are duals of these.
DUAL_OF: dict[str, str] = {
    "RP2+4S2": "RP2+4T2",
    "RP2+3S2": "RP2+3T2",
    "RP2+2S2": "RP2+2T2",
    "RP2+1S2": "RP2+1T2",
}

# Arrangement of the branch sextic -> class whose real locus lies over Q+.
ARRANGEMENTS: dict[str, str] = {
    "<4|0>": "RP2+4T2",
    "<3|0>": "RP2+3T2",
    "<2|0>": "RP2+2T2",
    "<1|0>": "RP2+1T2",
    "<0|0>": "RP2",
    "<|||>": "RP2+Klein",
    "<1|1>": "RP2+T2+S2",
}

# Real tritangent sections per arrangement: (total, hyperbolic, elliptic).
EXPECTED_TRITANGENTS: dict[str, tuple[int, int, int]] = {
    "<4|0>": (120, 64, 56),
    "<3|0>": (64, 36, 28),
    "<2|0>": (32, 20, 12),
    "<1|0>": (16, 12, 4),
    "<0|0>": (8, 8, 0),
    "<|||>": (24, 16, 8),
    "<1|1>": (24, 16, 8),
}

_LABEL_TERM = re.compile(r"^(\d*)(T2|S2|Klein)$")
_SMITH_TYPE = re.compile(r"^\(?M(?:-(\d))?\)?(?:I[ab])?$")
TOTAL_BETTI = 11


@dataclass(frozen=True)
class TopologySummary:
    """Handles, Klein bottles and spheres read off a class label."""

    handles: int
    klein_bottles: int
    spheres: int

    @property
    def components(self) -> int:
        return 1 + self.klein_bottles + self.spheres

    @property
    def h1_dim(self) -> int:
        return 1 + 2 * self.handles + 2 * self.klein_bottles

    @property
    def euler_characteristic(self) -> int:
        return 1 - 2 * self.handles + 2 * self.spheres

    @property
    def total_betti(self) -> int:
        return 2 * self.components + self.h1_dim

    @property
    def smith_defect(self) -> int:
        return (TOTAL_BETTI - self.total_betti) // 2


def parse_topology(label: str) -> TopologySummary:
    """
    Read "RP2+3T2", "RP2+Klein" or "RP2+T2+S2" as RP2 with handles plus
    disjoint Klein bottles and spheres.

    Raises:
        ValueError: On labels outside this grammar.
    """
    head, *terms = label.split("+")
    if head != "RP2":
        raise ValueError(f"class label must start with RP2: {label!r}")
    counts = {"T2": 0, "S2": 0, "Klein": 0}
    for term in terms:
        match = _LABEL_TERM.match(term)
        if match is None:
            raise ValueError(f"malformed class label term {term!r}")
        counts[match.group(2)] += int(match.group(1) or 1)
    return TopologySummary(counts["T2"], counts["Klein"], counts["S2"])


def smith_defect(smith_type: str) -> int:
    """k in "M-k", "(M-2)Ia" and friends; 0 for "M"."""
    match = _SMITH_TYPE.match(smith_type)
    if match is None:
        raise ValueError(f"malformed Smith type {smith_type!r}")
    return int(match.group(1) or 0)


def normalize_arrangement(code: str) -> str:
    """Accept "<4|0>", "⟨4|0⟩", "4|0", "|||" and return the canonical "<a|b>" form."""
    stripped = code.strip().replace("⟨", "<").replace("⟩", ">").replace(" ", "")
    if not stripped.startswith("<"):
        stripped = f"<{stripped}>"
    return stripped


def record_for(label: str) -> DeformationClass | None:
    return next((r for r in CLASS_RECORDS if r.label == label), None)
