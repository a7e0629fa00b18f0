"""Semi-decision procedures for simplicity of corank-1 multigerms.

Each gate implements one necessary or sufficient criterion and returns a
Verdict: NotSimple with the violated inequality, Simple with supporting
evidence, or Unknown.  The criteria have hypotheses that no finite
computation here can confirm (primitivity of a germ, transversality to
limiting tangent spaces, the lifting condition of the augmentation
formula); those are surfaced as named assertion flags that the caller may
supply, never assumed silently.  A wrong Simple or NotSimple is worse than
an Unknown.

Flags understood by the gates:

  * "dz_condition"         lifting condition of the codimension formula
  * "augmentation_simple"  the augmented germ itself is simple
  * "transversality"       the adjoined branch is transverse to the
                           limiting tangent spaces of the strata
  * "primitivity"          the non-stable part is primitive (not an
                           augmentation)
  * "is_augmentation"      the designated part is an augmentation
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import atlas as atlas_mod
from . import tangent
from .errors import NotCorankOneError, NotStableTypeError
from .germ import (AType, MultiGerm, corank, multiplicity, recognize_type,
                   stratum_dim)
from .ring import DEFAULT_POLICY, Poly, StabilizationPolicy, is_quasi_homogeneous

FLAG_DZ = "dz_condition"
FLAG_AUG_SIMPLE = "augmentation_simple"
FLAG_TRANSVERSALITY = "transversality"
FLAG_PRIMITIVITY = "primitivity"
FLAG_IS_AUGMENTATION = "is_augmentation"

SIMPLE = "simple"
NOT_SIMPLE = "not_simple"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    """Outcome of one gate (or of the aggregated report).

    NotSimple verdicts carry the rule and both sides of the violated
    inequality in `evidence`; Unknown verdicts always carry at least one
    unverified hypothesis or reason.
    """

    kind: str
    rule: str = ""
    evidence: Mapping[str, object] = field(default_factory=dict)
    unverified: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in (SIMPLE, NOT_SIMPLE, UNKNOWN):
            raise ValueError(f"unknown verdict kind {self.kind!r}")
        if self.kind == NOT_SIMPLE and not self.rule:
            raise ValueError("NotSimple requires a rule citation")
        if self.kind == UNKNOWN and not self.unverified:
            raise ValueError("Unknown requires a non-empty hypothesis list")

    @staticmethod
    def simple(rule: str, **evidence) -> Verdict:
        return Verdict(SIMPLE, rule=rule, evidence=evidence)

    @staticmethod
    def not_simple(rule: str, **evidence) -> Verdict:
        return Verdict(NOT_SIMPLE, rule=rule, evidence=evidence)

    @staticmethod
    def unknown(*reasons: str, **evidence) -> Verdict:
        return Verdict(UNKNOWN, evidence=evidence, unverified=tuple(reasons))


def nishimura_bound(n: int, p: int, r: int) -> Fraction:
    """The multiplicity bound (p^2 + (n-1) r) / (n(p-n) + n - 1).

    Every simple multigerm of minimal corank with n <= p must have
    multiplicity at most this rational number; in the equidimensional case
    the expression degenerates to (n^2 + (n-1) r) / (n - 1).
    """
    if n > p:
        raise ValueError("the bound needs n <= p")
    if n * p == 1:
        raise ValueError("the bound is undefined for n = p = 1")
    if r < 1:
        raise ValueError("need at least one branch")
    return Fraction(p * p + (n - 1) * r, n * (p - n) + n - 1)


def gate_nishimura(f: MultiGerm,
                   policy: StabilizationPolicy = DEFAULT_POLICY) -> Verdict:
    """Necessary condition: multiplicity must not exceed the bound."""
    if any(corank(b) > 1 for b in f.branches):
        return Verdict.unknown("corank at most 1")
    if f.n > f.p or f.n * f.p == 1:
        return Verdict.unknown(f"dimension range (n, p) = ({f.n}, {f.p}) not covered")
    bound = nishimura_bound(f.n, f.p, f.r)
    m0 = multiplicity(f, policy)
    if m0 > bound:
        return Verdict.not_simple(
            "multiplicity bound", multiplicity=m0, bound=bound,
            n=f.n, p=f.p, r=f.r)
    return Verdict.unknown("below the multiplicity bound; no conclusion",
                           multiplicity=m0, bound=bound)


def _is_prism_or_immersion(part: MultiGerm, t: AType) -> bool:
    if part.r != 1:
        return False
    if part.n == part.p:
        return t.ks == (1,)
    return t.ks == (0,)


def gate_tau_pairing(f: MultiGerm,
                     policy: StabilizationPolicy = DEFAULT_POLICY) -> Verdict:
    """Stable-pair obstruction over all branch bipartitions.

    For a split f = {fs, gs} into two stable parts with the analytic
    stratum of fs reduced to the origin: if the stratum of gs has dimension
    p - 2, or gs is not a prism on a Morse function / an immersion, the
    multigerm is not simple.  Applies for n = p >= 3 and for p = n + 1;
    the equidimensional n = 1, 2 cases are excluded and the gate abstains.
    """
    n, p, r = f.n, f.p, f.r
    if not ((n == p and n >= 3) or p == n + 1):
        return Verdict.unknown(
            f"dimension range (n, p) = ({n}, {p}) not covered")
    if r < 2:
        return Verdict.unknown("needs at least two branches")
    if r > 8:
        return Verdict.unknown("bipartition search is capped at 8 branches")
    try:
        branch_types = [recognize_type(MultiGerm((b,)), policy).ks[0]
                        for b in f.branches]
    except NotCorankOneError:
        return Verdict.unknown("corank at most 1")
    if n == p and any(k == 0 for k in branch_types):
        return Verdict.unknown("submersive branch in the equidimensional case")

    indices = range(r)
    stability_cache: dict[tuple[int, ...], bool] = {}

    def part_stable(sub: tuple[int, ...]) -> bool:
        if sub not in stability_cache:
            part = MultiGerm(tuple(f.branches[i] for i in sub))
            stability_cache[sub] = tangent.is_stable(part, policy)
        return stability_cache[sub]

    for size in range(1, r):
        for fs in itertools.combinations(indices, size):
            gs = tuple(i for i in indices if i not in fs)
            t_fs = AType(tuple(branch_types[i] for i in fs))
            t_gs = AType(tuple(branch_types[i] for i in gs))
            try:
                sd_f = stratum_dim(t_fs, n, p)
                sd_g = stratum_dim(t_gs, n, p)
            except NotStableTypeError:
                continue
            if sd_f != 0 or sd_g >= p - 1:
                # sd_g = p - 1 forces a single fold/immersion branch, which
                # both rules exempt
                continue
            if not (part_stable(fs) and part_stable(gs)):
                continue
            part_g = MultiGerm(tuple(f.branches[i] for i in gs))
            if sd_g == p - 2:
                return Verdict.not_simple(
                    "stable pair with strata 0 and p-2",
                    split=(fs, gs), stratum_dims=(sd_f, sd_g), p=p)
            if not _is_prism_or_immersion(part_g, t_gs):
                return Verdict.not_simple(
                    "zero stratum paired with a branch more degenerate than "
                    "a prism on a Morse function or an immersion",
                    split=(fs, gs), stratum_dims=(sd_f, sd_g),
                    partner_type=str(t_gs))
    return Verdict.unknown("no bipartition matches the hypotheses")


def gate_branch_count(f: MultiGerm,
                      policy: StabilizationPolicy = DEFAULT_POLICY) -> Verdict:
    """Equidimensional branch-count bound: simple needs r <= n - k_1 + 2."""
    n, p, r = f.n, f.p, f.r
    if n != p:
        return Verdict.unknown("needs the equidimensional case")
    if r < 2:
        return Verdict.unknown("needs at least two branches")
    try:
        t = recognize_type(f, policy)
    except NotCorankOneError:
        return Verdict.unknown("corank at most 1")
    k1 = t.ks[0]
    if k1 > n or any(k < 1 for k in t.ks):
        return Verdict.unknown("branch labels outside 1..n")
    if r > n - k1 + 2:
        return Verdict.not_simple(
            "branch count bound", branches=r, bound=n - k1 + 2, k1=k1, n=n)
    return Verdict.unknown("branch count within the bound",
                           branches=r, bound=n - k1 + 2)


def gate_primitive_plus_morse(f: MultiGerm,
                              policy: StabilizationPolicy = DEFAULT_POLICY,
                              primitive_flag: bool = False) -> Verdict:
    """A primitive codimension-1 part plus a fold (n = p > 2) or an
    immersion (p = n + 1, n > 3) is never simple.

    Primitivity is not machine-checkable here, so the rule only fires when
    the caller asserts it; the codimension of the non-fold part is verified
    by the engine.
    """
    n, p = f.n, f.p
    if f.r < 2:
        return Verdict.unknown("needs at least two branches")
    if n == p:
        threshold_met, variant = n > 2, "fold partner, equidimensional"
        partner_label = (1,)
    elif p == n + 1:
        threshold_met, variant = n > 3, "immersion partner, (n, n+1)"
        partner_label = (0,)
    else:
        return Verdict.unknown(f"dimension range ({n}, {p}) not covered")

    for idx in range(f.r):
        partner = MultiGerm((f.branches[idx],))
        try:
            t = recognize_type(partner, policy)
        except NotCorankOneError:
            continue
        if t.ks != partner_label:
            continue
        rest = MultiGerm(tuple(b for i, b in enumerate(f.branches) if i != idx))
        base_cod = tangent.ae_codim(rest, policy).value
        if base_cod != 1:
            continue
        if not threshold_met:
            return Verdict.unknown(
                f"dimensions below the threshold for the {variant} rule",
                base_codim=1, n=n, p=p)
        if not primitive_flag:
            return Verdict.unknown(
                FLAG_PRIMITIVITY, base_codim=1, partner_index=idx)
        return Verdict(
            NOT_SIMPLE,
            rule=f"primitive codimension-1 germ with {variant}",
            evidence={"n": n, "threshold": 2 if n == p else 3,
                      "partner_index": idx, "base_codim": 1},
            unverified=(FLAG_PRIMITIVITY,))
    return Verdict.unknown("no fold/immersion partner with a codimension-1 rest")


def gate_augconc(f_base_cod: int, phi: Poly,
                 hypotheses: Iterable[str] = ()) -> Verdict:
    """Simplicity of a simultaneous augmentation and concatenation.

    With phi quasi-homogeneous (verified by exact weight fit) and the
    lifting and simplicity hypotheses asserted, base codimension 1 makes
    the construction simple; under the transversality assertion, base
    codimension >= 2 makes it non-simple.
    """
    flags = frozenset(hypotheses)
    if not is_quasi_homogeneous(phi):
        return Verdict.unknown("phi is not quasi-homogeneous")
    if f_base_cod == 1:
        needed = {FLAG_DZ, FLAG_AUG_SIMPLE}
        missing = tuple(sorted(needed - flags))
        if missing:
            return Verdict.unknown(*missing, base_codim=1)
        return Verdict.simple(
            "augmentation-and-concatenation of a codimension-1 germ",
            base_codim=1)
    if f_base_cod >= 2 and FLAG_TRANSVERSALITY in flags:
        return Verdict(
            NOT_SIMPLE,
            rule="augmentation-and-concatenation of codimension >= 2",
            evidence={"base_codim": f_base_cod, "threshold": 1},
            unverified=tuple(sorted({FLAG_DZ, FLAG_AUG_SIMPLE} - flags)))
    if f_base_cod >= 2:
        return Verdict.unknown(FLAG_TRANSVERSALITY, base_codim=f_base_cod)
    return Verdict.unknown("stable base; the criterion does not apply",
                           base_codim=f_base_cod)


PARTNER_CUSPIDAL_EDGE = "cuspidal_edge"
PARTNER_TWO_FOLDS = "two_transversal_folds"
PARTNER_TWO_IMMERSIONS = "two_transversal_immersions"


def gate_aug_cusp(f_aug: MultiGerm, partner_kind: str,
                  policy: StabilizationPolicy = DEFAULT_POLICY) -> Verdict:
    """Multiplicity bound for an augmentation joined with a cuspidal edge or
    a transversal pair of folds (n >= p), or two transversal immersions
    (p = n + 1)."""
    n, p = f_aug.n, f_aug.p
    if partner_kind in (PARTNER_CUSPIDAL_EDGE, PARTNER_TWO_FOLDS):
        if n < p or n < 2:
            return Verdict.unknown(
                f"partner {partner_kind} needs n >= p and n >= 2")
        bound = Fraction(n * n - n + 1, n - 1)
    elif partner_kind == PARTNER_TWO_IMMERSIONS:
        if p != n + 1:
            return Verdict.unknown("immersion partners need p = n + 1")
        bound = Fraction(n * n + n, 2 * n - 1)
    else:
        raise ValueError(f"unknown partner kind {partner_kind!r}")
    m0 = multiplicity(f_aug, policy)
    if m0 > bound:
        return Verdict(
            NOT_SIMPLE,
            rule=f"augmentation multiplicity bound against {partner_kind}",
            evidence={"multiplicity": m0, "bound": bound},
            unverified=(FLAG_IS_AUGMENTATION,))
    return Verdict.unknown("multiplicity within the bound",
                           multiplicity=m0, bound=bound)


@dataclass(frozen=True)
class ReportAssertions:
    """Caller-supplied hypotheses for the aggregated report.

    flags feed the augmentation gates; augconc supplies the data that the
    simultaneous augmentation-and-concatenation gate cannot recover from
    the germ alone (base codimension and augmenting function); aug_cusp
    names a partner kind together with the branch indices of the
    augmentation part.
    """

    flags: frozenset[str] = frozenset()
    augconc: tuple[int, Poly] | None = None
    aug_cusp: tuple[str, tuple[int, ...]] | None = None


@dataclass(frozen=True)
class SimplicityReport:
    verdict: Verdict
    trace: tuple[tuple[str, Verdict], ...]


def simplicity_report(f: MultiGerm,
                      policy: StabilizationPolicy = DEFAULT_POLICY,
                      assertions: ReportAssertions | None = None) -> SimplicityReport:
    """Run every applicable gate plus the atlas lookup and aggregate.

    Any NotSimple wins; Simple arises only from an atlas match or from the
    augmentation-and-concatenation gate; otherwise Unknown with the union
    of the unverified hypotheses.  The final kind does not depend on the
    gate order; the trace records every gate that ran.
    """
    assertions = assertions or ReportAssertions()
    trace: list[tuple[str, Verdict]] = []

    trace.append(("nishimura", gate_nishimura(f, policy)))
    trace.append(("branch_count", gate_branch_count(f, policy)))
    trace.append(("tau_pairing", gate_tau_pairing(f, policy)))
    trace.append(("primitive_plus_morse", gate_primitive_plus_morse(
        f, policy, primitive_flag=FLAG_PRIMITIVITY in assertions.flags)))
    if assertions.augconc is not None:
        base_cod, phi = assertions.augconc
        trace.append(("augconc", gate_augconc(base_cod, phi, assertions.flags)))
    if assertions.aug_cusp is not None:
        partner_kind, part = assertions.aug_cusp
        f_aug = MultiGerm(tuple(f.branches[i] for i in part))
        trace.append(("aug_cusp", gate_aug_cusp(f_aug, partner_kind, policy)))

    atlas_verdict: Verdict
    try:
        match = atlas_mod.lookup(f, policy)
    except NotCorankOneError:
        match = None
    if match is not None and match.exact:
        atlas_verdict = Verdict.simple(
            "atlas match",
            candidates=tuple((name, dict(params)) for name, params in match.matches))
    elif match is not None and match.matches:
        atlas_verdict = Verdict.unknown(
            "invariants match atlas candidates but no literal normal-form match",
            candidates=tuple((name, dict(params)) for name, params in match.matches))
    else:
        atlas_verdict = Verdict.unknown("no atlas entry with these invariants")
    trace.append(("atlas", atlas_verdict))

    for name, verdict in trace:
        if verdict.kind == NOT_SIMPLE:
            return SimplicityReport(verdict=verdict, trace=tuple(trace))
    for name, verdict in trace:
        if verdict.kind == SIMPLE:
            return SimplicityReport(verdict=verdict, trace=tuple(trace))
    reasons: list[str] = []
    for _, verdict in trace:
        for reason in verdict.unverified:
            if reason not in reasons:
                reasons.append(reason)
    return SimplicityReport(verdict=Verdict.unknown(*reasons),
                            trace=tuple(trace))
