"""Semi-decision procedure for emptiness of a context-free intersection.

Each round: (1) if the Parikh images of the current languages already fail to
intersect, the intersection is empty; (2) otherwise build a Parikh-equivalent
bounded language B for each current language, concatenate them, and decide
intersection inside B exactly via block projections; (3) a found witness is
verified in every original grammar, otherwise every language is refined by
intersecting with the complement of B and the loop continues.  Refinement
only removes words certified witness-free, so an emptiness answer is sound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .boundedgen import parikh_equivalent_bounded
from .errors import BudgetError, InputError, SoundnessError
from .grammar import (Cfg, block_projection, cyk_membership, product_with_dfa,
                      simplify, trim, union_alphabets, with_alphabet)
from .semilinear import (parikh_semilinear, sl_intersect, sl_membership,
                         witness_for_vector)
from .symbols import ElementaryBounded, Word, eb, eb_complement_dfa, eb_concat


@dataclass(frozen=True)
class IntersectionInstance:
    grammars: tuple[Cfg, ...]

    def __post_init__(self):
        if len(self.grammars) < 1:
            raise InputError("need at least one grammar")


@dataclass
class IterationState:
    round: int
    current: tuple[Cfg, ...]
    bounded: ElementaryBounded | None = None


@dataclass(frozen=True)
class IntersectionResult:
    status: str                      # "nonempty" | "empty" | "unknown"
    witness: Word | None = None
    rounds: int = 0

    @property
    def exit_code(self) -> int:
        return {"nonempty": 0, "empty": 1, "unknown": 2}[self.status]


def intersect_modulo(grammars: list[Cfg], b: ElementaryBounded) -> Word | None:
    """A word in (intersection of all L_i) intersect B, or None if there is none.

    Project every L_i intersect B onto block-count vectors (t1..tn), intersect
    the resulting semilinear sets, and rebuild w = w1^t1 ... wn^tn from any
    vector in the common image.  The membership of the rebuilt word in every
    grammar is re-checked; failure would mean a soundness bug.
    """
    if not grammars:
        raise InputError("need at least one grammar")
    words = b.words
    if not words:
        w: Word = ()
        return w if all(cyk_membership(g, w) for g in grammars) else None
    common = None
    try:
        for g in grammars:
            projected = block_projection(trim(g), words)
            image = parikh_semilinear(projected)
            common = image if common is None else sl_intersect(common, image)
            if common.is_empty():
                return None
    except BudgetError:
        return None  # sound: a missed witness only delays the procedure
    vector = min(c.constant for c in common.components)
    witness: Word = ()
    for t, wi in zip(vector, words):
        witness += wi * t
    for g in grammars:
        if not cyk_membership(g, witness):
            raise SoundnessError("reconstructed witness failed membership")
    return witness


def _probe_common_vector(images) -> tuple | None:
    """Some vector in every image, found by testing component constants of
    each image against the others; None when the probe finds nothing."""
    best = None
    for i, img in enumerate(images):
        for comp in img.components:
            v = comp.constant
            if any(not sl_membership(o, v)
                   for j, o in enumerate(images) if j != i):
                continue
            if best is None or sum(v) < sum(best):
                best = v
    return best


def refine(g: Cfg, b: ElementaryBounded) -> Cfg:
    """Grammar for L(g) minus the bounded language (intersection with its
    complement), trimmed."""
    g = trim(g)
    dfa = eb_complement_dfa(b, g.terminals)
    return trim(product_with_dfa(g, dfa))


def semi_algorithm(instance: IntersectionInstance, max_rounds: int = 5,
                   states: list[IterationState] | None = None
                   ) -> IntersectionResult:
    sigma = union_alphabets(*[g.terminals for g in instance.grammars])
    originals = tuple(with_alphabet(g, sigma) for g in instance.grammars)
    current = tuple(simplify(trim(g)) for g in originals)
    for rnd in range(1, max_rounds + 1):
        state = IterationState(rnd, current)
        if states is not None:
            states.append(state)
        vector = None
        try:
            images = [parikh_semilinear(g) for g in current]
        except BudgetError:
            images = None
        if images is not None:
            try:
                common = images[0]
                for img in images[1:]:
                    common = sl_intersect(common, img)
                if common.is_empty():
                    return IntersectionResult("empty", rounds=rnd)
                vector = min(c.constant for c in common.components)
            except BudgetError:
                # disjointness not settled; probe for some common vector
                vector = _probe_common_vector(images)

        if vector is not None:
            # fast path: a common Parikh vector yields candidate witness
            # words far more cheaply than the full bounded construction
            candidates: list[Word] = []
            for g in current:
                w = witness_for_vector(g, vector)
                if w is not None and w not in candidates:
                    candidates.append(w)
            for w in candidates:
                if all(cyk_membership(g, w) for g in originals):
                    return IntersectionResult("nonempty", witness=w,
                                              rounds=rnd)
            if candidates:
                witness = intersect_modulo(list(originals), eb(candidates))
                if witness is not None:
                    return IntersectionResult("nonempty", witness=witness,
                                              rounds=rnd)
        bounded = eb_concat(*[parikh_equivalent_bounded(g) for g in current])
        state.bounded = bounded
        witness = intersect_modulo(list(originals), bounded)
        if witness is not None:
            return IntersectionResult("nonempty", witness=witness, rounds=rnd)
        current = tuple(simplify(refine(g, bounded)) for g in current)
    return IntersectionResult("unknown", rounds=max_rounds)


def progress_trace(g: Cfg, w: Word, max_rounds: int = 10) -> int:
    """The first refinement round i at which w is no longer in L_i, when the
    procedure runs on the single language L(g)."""
    from .errors import ProgressNotReached

    if not cyk_membership(g, w):
        raise InputError("w must belong to L(g)")
    current = simplify(trim(g))
    for rnd in range(1, max_rounds + 1):
        bounded = parikh_equivalent_bounded(current)
        current = simplify(refine(current, bounded))
        if not cyk_membership(current, w):
            return rnd
    raise ProgressNotReached(f"word not removed within {max_rounds} rounds")
