"""
Acceptance suite.

Checks are grouped as tables (catalog, line counts, Smith models), matching
(Hasse pairings), pairs (cancelation under every admissible chi) and
tritangents (tables, classifier, nodal counts). Every check yields a
CheckResult; nothing here raises on a failed comparison.
"""

import random
from collections.abc import Callable, Iterable
from typing import Any

import structlog

from services.hasse_matching.service import (
    HasseMatchingService,
    signed_sum_from_pairing,
    verify_cancelation,
)
from services.pin_quadratic.service import PinQuadraticService, qhat, special_basis
from services.real_structures.catalog import (
    CATALOG_VERSION,
    EXPECTED_TRITANGENTS,
    parse_topology,
    smith_defect,
)
from services.real_structures.service import (
    RealStructureService,
    bertini_dual,
    real_roots,
    root_rank,
)
from services.roots.service import (
    ROOT_COUNT,
    RootSystemService,
    SimpleSystem,
    dynkin_type,
    phi,
    phi_inverse,
)
from services.tritangent.forms import BinaryForm, real_root_signs, resultant
from services.tritangent.service import (
    TritangentService,
    classify_tritangent,
    nodal_signed_count,
    species_by_parity,
    species_by_resultant,
)
from shared.config import Settings, get_settings
from shared.lattice import CANONICAL, LatticeVector, matrix_rank
from shared.models import CheckResult, Side, Species

logger = structlog.get_logger(__name__)

GROUPS = ("tables", "matching", "pairs", "tritangents")

EXPECTED_PAIRS = {"E8": 56, "E7": 28, "D6": 12, "D4": 4, "A1": 0}

# Eigen types whose real roots all have qhat = 0.
VANISHING_TYPES = {"0", "A1", "2A1", "3A1", "4A1"}


class VerificationService:
    """
    Runs the acceptance checks against live computations.
    """

    def __init__(
        self,
        settings: Settings | None = None,
        roots: RootSystemService | None = None,
        real_structures: RealStructureService | None = None,
        pin_quadratic: PinQuadraticService | None = None,
        hasse: HasseMatchingService | None = None,
        tritangent: TritangentService | None = None,
    ):
        """
        Initialize verification service.

        Args:
            settings: Settings instance. If None, loads from environment.
            roots, real_structures, pin_quadratic, hasse, tritangent:
                Services to verify; built from settings when omitted.
        """
        self.settings = settings or get_settings()
        self.roots = roots or RootSystemService(self.settings)
        self.real_structures = real_structures or RealStructureService(self.settings)
        self.pin_quadratic = pin_quadratic or PinQuadraticService(self.settings)
        self.hasse = hasse or HasseMatchingService(self.settings)
        self.tritangent = tritangent or TritangentService(
            self.settings, self.real_structures, self.pin_quadratic
        )

    def run(self, groups: Iterable[str] = GROUPS) -> list[CheckResult]:
        """
        Run the named groups in canonical order.

        Raises:
            ValueError: On an unknown group name.
        """
        selected = set(groups)
        unknown = selected - set(GROUPS)
        if unknown:
            raise ValueError(f"unknown check groups: {sorted(unknown)}")
        runners: dict[str, Callable[[], list[CheckResult]]] = {
            "tables": self.tables,
            "matching": self.matching,
            "pairs": self.pairs,
            "tritangents": self.tritangents,
        }
        results: list[CheckResult] = []
        for group in GROUPS:
            if group in selected:
                results.extend(runners[group]())
        failed = [r.name for r in results if not r.passed]
        logger.info("verification_finished", checks=len(results), failed=len(failed))
        return results

    @staticmethod
    def _check(group: str, name: str, passed: bool, **detail: Any) -> CheckResult:
        if not passed:
            logger.warning("check_failed", group=group, name=name, **detail)
        return CheckResult(group=group, name=name, passed=bool(passed), detail=detail)

    # =========================================================================
    # Tables
    # =========================================================================

    def tables(self) -> list[CheckResult]:
        group = "tables"
        results = []

        roots = self.roots.roots
        exceptional = self.roots.exceptional
        bijection = {phi(v) for v in exceptional} == set(roots) and all(
            phi(phi_inverse(e)) == e for e in roots
        )
        results.append(
            self._check(
                group,
                "enumeration",
                len(roots) == ROOT_COUNT and len(exceptional) == ROOT_COUNT and bijection,
                roots=len(roots),
                exceptional=len(exceptional),
                phi_bijective=bijection,
            )
        )
        results.append(
            self._check(
                group,
                "catalog_version",
                self.settings.catalog.version == CATALOG_VERSION,
                configured=self.settings.catalog.version,
                catalog=CATALOG_VERSION,
            )
        )

        for entry in self.real_structures.catalog():
            record, sigma = entry.record, entry.structure
            prefix = record.label
            simple = self.real_structures.real_simple_system(sigma)
            eigen_type = dynkin_type(simple)
            results.append(
                self._check(group, f"{prefix}:eigen_type", eigen_type == record.eigen_type,
                            computed=eigen_type, expected=record.eigen_type)
            )

            lines = self.pin_quadratic.lines(sigma)
            expected = (record.expected_lines, record.expected_h, record.expected_e)
            observed = sorted({(c.total, c.hyperbolic, c.elliptic) for c in lines.counts})
            results.append(
                self._check(group, f"{prefix}:line_counts", observed == [expected],
                            computed=[list(o) for o in observed], expected=list(expected),
                            admissible=len(lines.admissible))
            )

            has_elliptic = all(c.elliptic > 0 for c in lines.counts)
            if record.eigen_type in VANISHING_TYPES:
                vanishing = all(qhat(f, e) == 0 for f in lines.admissible for e in lines.model.real_roots)
                results.append(self._check(group, f"{prefix}:qhat_vanishes", vanishing))
            else:
                results.append(self._check(group, f"{prefix}:elliptic_roots_exist", has_elliptic))

            model = lines.model
            topology = parse_topology(record.label)
            betti = model.mod2_betti(record.components)
            smith_ok = (
                model.dimension == record.expected_h1_dim == topology.h1_dim
                and topology.components == record.components
                and (11 - betti) // 2 == smith_defect(record.smith_type) == topology.smith_defect
            )
            results.append(
                self._check(group, f"{prefix}:smith_quotient", smith_ok,
                            dimension=model.dimension, expected=record.expected_h1_dim,
                            total_betti=betti, smith_type=record.smith_type)
            )
            results.append(
                self._check(group, f"{prefix}:euler_characteristic",
                            model.euler_characteristic == topology.euler_characteristic,
                            lefschetz=model.euler_characteristic,
                            topology=topology.euler_characteristic)
            )
            results.append(
                self._check(group, f"{prefix}:mod2_pairing",
                            model.pairing_is_nondegenerate() and model.canonical_is_characteristic())
            )

        for plus, minus in self.real_structures.bertini_pairs():
            plus_lines = self.pin_quadratic.lines(plus.structure).count
            minus_lines = self.pin_quadratic.lines(bertini_dual(plus.structure)).count
            total = plus_lines.signed_sum + minus_lines.signed_sum
            ranks = root_rank(real_roots(plus.structure)) + root_rank(
                real_roots(bertini_dual(plus.structure))
            )
            results.append(
                self._check(group, f"{plus.label}|{minus.label}:signed_total",
                            total == 16 and ranks == 8, signed_total=total, rank_total=ranks)
            )
        return results

    # =========================================================================
    # Matching
    # =========================================================================

    def matching(self) -> list[CheckResult]:
        group = "matching"
        results = []
        for label, expected in EXPECTED_PAIRS.items():
            system = self.roots.standard_system(label)
            results.append(self._pairing_check(group, label, system, expected))

        for entry in self.real_structures.catalog():
            system = self.real_structures.real_simple_system(entry.structure)
            expected = (len(real_roots(entry.structure)) // 2 - system.rank) // 2
            results.append(self._pairing_check(group, f"{entry.label}:real_roots", system, expected))
        return results

    def _pairing_check(self, group: str, name: str, system: SimpleSystem, expected: int) -> CheckResult:
        poset = self.hasse.poset(system)
        pairing = self.hasse.pairing(system)
        covers = set(poset.covers)
        all_covers = all(pair in covers for pair in pairing.pairs)
        non_simple = {root for root, _ in poset.nodes} - set(system.roots)
        exhaustive = pairing.roots() == non_simple
        return self._check(
            group,
            name,
            len(pairing) == expected and all_covers and exhaustive,
            pairs=len(pairing),
            expected=expected,
            nodes=len(poset.nodes),
        )

    # =========================================================================
    # Pairs
    # =========================================================================

    def pairs(self) -> list[CheckResult]:
        group = "pairs"
        results = []
        for entry in self.real_structures.catalog():
            lines = self.pin_quadratic.lines(entry.structure)
            base = self.hasse.pairing(lines.model.simple)
            failures = 0
            for f in lines.admissible:
                basis = special_basis(f)
                if basis is None:
                    failures += 1
                    continue
                pairing = self.hasse.pairing_for(basis)
                cancels = verify_cancelation(f, pairing)
                recomputed = signed_sum_from_pairing(f, pairing)
                if not cancels or recomputed != 2 * lines.model.rank or len(pairing) != len(base):
                    failures += 1
            results.append(
                self._check(group, f"{entry.label}:cancelation", failures == 0,
                            admissible=len(lines.admissible), failures=failures,
                            signed_sum=2 * lines.model.rank)
            )
        return results

    # =========================================================================
    # Tritangents
    # =========================================================================

    def tritangents(self) -> list[CheckResult]:
        group = "tritangents"
        config = self.settings.tritangent
        rng = random.Random(config.seed)
        results = []

        for code, expected in EXPECTED_TRITANGENTS.items():
            count = self.tritangent.table(code)
            results.append(
                self._check(group, f"table:{code}",
                            count.as_tuple() == expected and count.hyperbolic - count.elliptic == 8,
                            computed=list(count.as_tuple()), expected=list(expected))
            )

        results.extend(self._worked_examples(group))

        agree = 0
        for _ in range(config.random_instances):
            p4, q3 = self._random_pair(rng, config.coefficient_bound)
            if species_by_parity(p4, q3) == species_by_resultant(p4, q3):
                agree += 1
        results.append(
            self._check(group, "parity_equals_resultant_sign", agree == config.random_instances,
                        instances=config.random_instances, agree=agree)
        )

        stable = 0
        for _ in range(config.substitution_trials):
            p4, q3 = self._random_pair(rng, config.coefficient_bound)
            p2 = self._random_form(rng, 2, config.coefficient_bound)
            p6 = q3 * q3 if rng.random() < 0.5 else -(q3 * q3)
            before = classify_tritangent(p2, p4, p6)
            a, b, c, d = self._random_substitution(rng, config.coefficient_bound)
            after = classify_tritangent(
                p2.substitute(a, b, c, d), p4.substitute(a, b, c, d), p6.substitute(a, b, c, d)
            )
            other_p2 = self._random_form(rng, 2, config.coefficient_bound)
            shifted = classify_tritangent(other_p2, p4, p6)
            if _verdict_key(before) == _verdict_key(after) == _verdict_key(shifted):
                stable += 1
        results.append(
            self._check(group, "substitution_and_p2_invariance", stable == config.substitution_trials,
                        trials=config.substitution_trials, stable=stable)
        )

        for k in range(9):
            nodes = self._random_independent_roots(rng, k)
            count = nodal_signed_count(nodes)
            results.append(
                self._check(group, f"nodal:k={k}", count == 16 - 2 * k, computed=count, expected=16 - 2 * k)
            )
        for k in range(5):
            nodal = self.tritangent.nodal(k)
            ok = nodal["signed_tritangent_count"] == 8 - k and nodal["signed_cubic_conic_count"] == 4 - k
            results.append(self._check(group, f"nodal_sections:k={k}", ok, **nodal))
        return results

    def _worked_examples(self, group: str) -> list[CheckResult]:
        x0x1_diff = BinaryForm.of([0, 1, -1, 0])
        p4_square = BinaryForm.of([1, 0, 2, 0, 1])
        p4_mixed = BinaryForm.of([-1, 0, 3, 0, 4])
        p2 = BinaryForm.of([1, 0, 1])
        cases = [
            ("all_positive", p4_square, x0x1_diff * x0x1_diff, Side.PLUS, Species.HYPERBOLIC, (3, 3)),
            ("two_positive", p4_mixed, x0x1_diff * x0x1_diff, Side.PLUS, Species.ELLIPTIC, (3, 2)),
            (
                "minus_side",
                p4_square,
                -(BinaryForm.of([1, 0, -1, 0]) * BinaryForm.of([1, 0, -1, 0])),
                Side.MINUS,
                Species.HYPERBOLIC,
                (3, 3),
            ),
        ]
        results = []
        for name, p4, p6, side, species, signs in cases:
            verdict = classify_tritangent(p2, p4, p6)
            ok = (
                verdict.side == side
                and verdict.species == species
                and (verdict.real_tangencies, verdict.positive_real_tangencies) == signs
            )
            results.append(self._check(group, f"example:{name}", ok, **verdict.to_payload()))

        single = real_root_signs(BinaryForm.of([1, 0, 0, 0, 1]), BinaryForm.of([1, 0, 1, 0]))
        results.append(self._check(group, "example:single_real_root", single == (1, 1), signs=list(single)))
        return results

    @staticmethod
    def _random_form(rng: random.Random, degree: int, bound: int) -> BinaryForm:
        return BinaryForm.of(rng.randint(-bound, bound) for _ in range(degree + 1))

    def _random_pair(self, rng: random.Random, bound: int) -> tuple[BinaryForm, BinaryForm]:
        while True:
            p4 = self._random_form(rng, 4, bound)
            q3 = self._random_form(rng, 3, bound)
            if not q3.is_zero and resultant(p4, q3) != 0:
                return p4, q3

    @staticmethod
    def _random_substitution(rng: random.Random, bound: int) -> tuple[int, int, int, int]:
        while True:
            a, b, c, d = (rng.randint(-bound, bound) for _ in range(4))
            if a * d - b * c != 0:
                return a, b, c, d

    def _random_independent_roots(self, rng: random.Random, k: int) -> list[LatticeVector]:
        roots = self.roots.roots
        chosen: list[LatticeVector] = []
        while len(chosen) < k:
            candidate = rng.choice(roots)
            if matrix_rank([CANONICAL, *chosen, candidate]) == len(chosen) + 2:
                chosen.append(candidate)
        return chosen


def _verdict_key(verdict: Any) -> tuple[Any, ...]:
    return (
        verdict.side,
        verdict.species,
        verdict.real_tangencies,
        verdict.positive_real_tangencies,
        verdict.resultant > 0,
    )


def get_verification_service() -> VerificationService:
    """Create and return a VerificationService instance."""
    return VerificationService()
