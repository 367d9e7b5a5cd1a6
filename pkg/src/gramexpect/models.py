"""Column-vector distributions, their second-moment matrices, and sampling.

A model describes the law of one random column w in Z^t or Q^t. Three kinds
are supported:

* ``DiscreteVectorDistribution``: finitely many atom vectors with rational
  probabilities (the fully general case, used by the brute-force oracle).
* ``MultinomialCountModel``: w ~ Multinomial(ell, p), the count vector of
  ell independent categorical trials over t categories.
* ``CompoundCountModel``: a multinomial whose trial count ell is itself
  random with a finite rational law.

The second-moment matrix M with M[i][j] = E(w_i w_j) is what every exact
expectation downstream consumes. For the multinomial it is

    M[i][i] = ell (ell - 1) p_i^2 + ell p_i
    M[i][j] = ell (ell - 1) p_i p_j      (i != j)

and the compound case averages those entries over the law of ell.

Sampling is exact: categorical draws compare a 64-bit uniform integer
against precomputed integer thresholds ceil(cumprob * 2^64), so replicate
streams are reproducible bit for bit and independent of float rounding.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil
from random import Random
from typing import Sequence

from .matrices import ExactMatrix, leverrier_char_coeffs
from .scalars import format_rational, parse_rational

_TWO64 = 1 << 64


class InvalidModelError(ValueError):
    """A model definition violates its constraints (raised on load too)."""


def _coerce_prob_vector(probs: Sequence[Fraction | int | str], what: str) -> tuple[Fraction, ...]:
    if len(probs) == 0:
        raise InvalidModelError(f"{what} must be non-empty")
    out = []
    for p in probs:
        q = parse_rational(p) if isinstance(p, str) else Fraction(p)
        if q < 0:
            raise InvalidModelError(f"{what} entries must be nonnegative, got {q}")
        out.append(q)
    total = sum(out)
    if total != 1:
        raise InvalidModelError(f"{what} must sum to 1, got {total}")
    return tuple(out)


@dataclass(frozen=True)
class DiscreteVectorDistribution:
    """Finitely many rational atom vectors with probabilities summing to 1."""

    atoms: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    def __post_init__(self) -> None:
        if not self.atoms:
            raise InvalidModelError("distribution needs at least one atom")
        t = len(self.atoms[0][0])
        if t < 1:
            raise InvalidModelError("atom vectors must have dimension >= 1")
        if any(len(vec) != t for vec, _ in self.atoms):
            raise InvalidModelError("atom vectors must all have the same dimension")
        probs = _coerce_prob_vector([p for _, p in self.atoms], "atom probabilities")
        vectors = tuple(tuple(Fraction(v) for v in vec) for vec, _ in self.atoms)
        object.__setattr__(self, "atoms", tuple(zip(vectors, probs)))

    @classmethod
    def from_pairs(cls, pairs) -> "DiscreteVectorDistribution":
        atoms = []
        for vec, prob in pairs:
            vector = tuple(parse_rational(v) if isinstance(v, str) else Fraction(v) for v in vec)
            q = parse_rational(prob) if isinstance(prob, str) else Fraction(prob)
            atoms.append((vector, q))
        return cls(tuple(atoms))

    @property
    def t(self) -> int:
        return len(self.atoms[0][0])


@dataclass(frozen=True)
class MultinomialCountModel:
    """w ~ Multinomial(ell, probs): counts of ell categorical trials.

    ell = 0 is allowed and yields the zero vector with probability 1.
    """

    ell: int
    probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.ell, int) or self.ell < 0:
            raise InvalidModelError(f"ell must be a nonnegative integer, got {self.ell!r}")
        object.__setattr__(self, "probs", _coerce_prob_vector(self.probs, "probs"))

    @property
    def t(self) -> int:
        return len(self.probs)


@dataclass(frozen=True)
class CompoundCountModel:
    """Multinomial counts whose trial count ell has a finite rational law."""

    probs: tuple[Fraction, ...]
    ell_law: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", _coerce_prob_vector(self.probs, "probs"))
        if not self.ell_law:
            raise InvalidModelError("ell_law needs at least one entry")
        ells = [e for e, _ in self.ell_law]
        if any(not isinstance(e, int) or e < 0 for e in ells):
            raise InvalidModelError("ell_law values must be nonnegative integers")
        if len(set(ells)) != len(ells):
            raise InvalidModelError("ell_law values must be distinct")
        weights = _coerce_prob_vector([p for _, p in self.ell_law], "ell_law probabilities")
        ordered = tuple(sorted(zip(ells, weights)))
        object.__setattr__(self, "ell_law", ordered)

    @property
    def t(self) -> int:
        return len(self.probs)


Model = DiscreteVectorDistribution | MultinomialCountModel | CompoundCountModel


@dataclass(frozen=True)
class MomentMatrix:
    """Second-moment matrix E(w w^T): symmetric with nonnegative diagonal."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        t = len(self.entries)
        if t < 1 or any(len(row) != t for row in self.entries):
            raise InvalidModelError("moment matrix must be square and non-empty")
        for i in range(t):
            if self.entries[i][i] < 0:
                raise InvalidModelError(f"moment matrix diagonal entry {i} is negative")
            for j in range(i + 1, t):
                if self.entries[i][j] != self.entries[j][i]:
                    raise InvalidModelError(f"moment matrix not symmetric at ({i},{j})")
        # Necessary PSD condition: every sign-adjusted characteristic
        # coefficient of a second-moment matrix is nonnegative.
        coeffs = leverrier_char_coeffs(ExactMatrix(self.entries))
        for i, c in enumerate(coeffs.values):
            if c < 0:
                raise InvalidModelError(
                    f"not a valid moment matrix: characteristic coefficient c_{i} = {c} < 0"
                )

    @property
    def dimension(self) -> int:
        return len(self.entries)

    def as_exact_matrix(self) -> ExactMatrix:
        return ExactMatrix(self.entries)


def moment_matrix_from_atoms(dist: DiscreteVectorDistribution) -> MomentMatrix:
    """M[i][j] = sum over atoms of prob * v_i * v_j."""
    t = dist.t
    out = [[Fraction(0)] * t for _ in range(t)]
    for vector, prob in dist.atoms:
        for i in range(t):
            if vector[i] == 0:
                continue
            for j in range(i, t):
                out[i][j] += prob * vector[i] * vector[j]
    for i in range(t):
        for j in range(i + 1, t):
            out[j][i] = out[i][j]
    return MomentMatrix(tuple(tuple(row) for row in out))


def _multinomial_entries(ell: int, probs: Sequence[Fraction]) -> list[list[Fraction]]:
    t = len(probs)
    pair = Fraction(ell * (ell - 1))
    out = [[pair * probs[i] * probs[j] for j in range(t)] for i in range(t)]
    for i in range(t):
        out[i][i] += ell * probs[i]
    return out


def moment_matrix_multinomial(model: MultinomialCountModel) -> MomentMatrix:
    return MomentMatrix(tuple(tuple(row) for row in _multinomial_entries(model.ell, model.probs)))


def moment_matrix_compound(model: CompoundCountModel) -> MomentMatrix:
    """Entrywise average of the fixed-ell matrices under the law of ell."""
    t = model.t
    out = [[Fraction(0)] * t for _ in range(t)]
    for ell, weight in model.ell_law:
        fixed = _multinomial_entries(ell, model.probs)
        for i in range(t):
            for j in range(t):
                out[i][j] += weight * fixed[i][j]
    return MomentMatrix(tuple(tuple(row) for row in out))


def moment_matrix(model: Model) -> MomentMatrix:
    if isinstance(model, DiscreteVectorDistribution):
        return moment_matrix_from_atoms(model)
    if isinstance(model, MultinomialCountModel):
        return moment_matrix_multinomial(model)
    if isinstance(model, CompoundCountModel):
        return moment_matrix_compound(model)
    raise InvalidModelError(f"unsupported model type: {type(model).__name__}")


class CategoricalSampler:
    """Exact categorical draws over rational probabilities.

    Thresholds are T_k = ceil(cum_k * 2^64). A draw takes one 64-bit uniform
    u and returns the smallest k with u < T_k; ties resolve toward the lower
    index, and zero-probability categories are never selected.
    """

    def __init__(self, probs: Sequence[Fraction]):
        probs = _coerce_prob_vector(probs, "probs")
        cum = Fraction(0)
        thresholds = []
        for p in probs:
            cum += p
            thresholds.append(ceil(cum * _TWO64))
        self._thresholds = thresholds

    def draw(self, rng: Random) -> int:
        return bisect_right(self._thresholds, rng.getrandbits(64))


@lru_cache(maxsize=64)
def _sampler_for(probs: tuple[Fraction, ...]) -> CategoricalSampler:
    return CategoricalSampler(probs)


def sample_count_vector(model: MultinomialCountModel | CompoundCountModel, rng: Random) -> tuple[int, ...]:
    """One count vector: ell categorical trials tallied per category.

    For the compound model, ell is drawn from its law first (one categorical
    draw over the law, then the trials).
    """
    if isinstance(model, CompoundCountModel):
        law_sampler = _sampler_for(tuple(p for _, p in model.ell_law))
        ell = model.ell_law[law_sampler.draw(rng)][0]
    else:
        ell = model.ell
    sampler = _sampler_for(model.probs)
    counts = [0] * len(model.probs)
    for _ in range(ell):
        counts[sampler.draw(rng)] += 1
    return tuple(counts)


def sample_vector(model: Model, rng: Random) -> tuple[Fraction, ...] | tuple[int, ...]:
    """One column vector drawn from the model."""
    if isinstance(model, DiscreteVectorDistribution):
        sampler = _sampler_for(tuple(p for _, p in model.atoms))
        return model.atoms[sampler.draw(rng)][0]
    return sample_count_vector(model, rng)


def paper_model() -> MultinomialCountModel:
    """The built-in worked example: ell = 10 trials over four categories."""
    return MultinomialCountModel(
        ell=10,
        probs=(Fraction(3, 8), Fraction(1, 4), Fraction(1, 4), Fraction(1, 8)),
    )


def model_to_dict(model: Model) -> dict:
    if isinstance(model, DiscreteVectorDistribution):
        return {
            "type": "atoms",
            "t": model.t,
            "atoms": [
                {"vector": [format_rational(v) for v in vec], "prob": format_rational(p)}
                for vec, p in model.atoms
            ],
        }
    if isinstance(model, MultinomialCountModel):
        return {
            "type": "multinomial",
            "t": model.t,
            "ell": model.ell,
            "probs": [format_rational(p) for p in model.probs],
        }
    if isinstance(model, CompoundCountModel):
        return {
            "type": "compound",
            "t": model.t,
            "probs": [format_rational(p) for p in model.probs],
            "ell_law": [{"ell": e, "prob": format_rational(p)} for e, p in model.ell_law],
        }
    raise InvalidModelError(f"unsupported model type: {type(model).__name__}")


def model_to_json_str(model: Model) -> str:
    """Canonical one-line JSON: sorted keys, compact separators."""
    return json.dumps(model_to_dict(model), sort_keys=True, separators=(",", ":")) + "\n"


def model_from_dict(obj: object) -> Model:
    if not isinstance(obj, dict):
        raise InvalidModelError("model JSON must be an object")
    kind = obj.get("type")
    try:
        if kind == "atoms":
            model: Model = DiscreteVectorDistribution.from_pairs(
                (atom["vector"], atom["prob"]) for atom in obj["atoms"]
            )
        elif kind == "multinomial":
            model = MultinomialCountModel(ell=obj["ell"], probs=tuple(obj["probs"]))
        elif kind == "compound":
            model = CompoundCountModel(
                probs=tuple(obj["probs"]),
                ell_law=tuple((entry["ell"], entry["prob"]) for entry in obj["ell_law"]),
            )
        else:
            raise InvalidModelError(
                f'model "type" must be atoms, multinomial, or compound, got {kind!r}'
            )
    except InvalidModelError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidModelError(f"malformed {kind!r} model: {exc}") from exc
    if "t" in obj and obj["t"] != model.t:
        raise InvalidModelError(f'declared "t" = {obj["t"]} but the model has dimension {model.t}')
    return model


def model_from_json_str(text: str) -> Model:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidModelError(f"model file is not valid JSON: {exc}") from exc
    return model_from_dict(obj)
