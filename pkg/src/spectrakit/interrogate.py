"""Identifying a spectrum among candidates by admissible questions.

An admissible question hands over a finite list of values and receives the
first value of the spectrum once those are removed. Lists are multisets: a
value listed ``k`` times removes up to ``k`` occurrences.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_int, check_positive
from .exceptions import (
    CutoffExceeded,
    DomainError,
    Indistinguishable,
    NoCandidateMatches,
)
from .spectrum import LengthSpectrum, isospectral_compare


@dataclass(frozen=True)
class AdmissibleQuestion:
    """The exclusion multiset of one question."""

    exclusions: tuple = ()

    def __post_init__(self):
        vals = tuple(check_positive(v, "exclusion") for v in self.exclusions)
        object.__setattr__(self, "exclusions", vals)


class SpectrumOracle:
    """Answers admissible questions about a hidden spectrum and counts them.

    Access is serialized with a lock; use one oracle per interrogation.
    """

    def __init__(self, ground_truth, match_tolerance=None):
        if not isinstance(ground_truth, LengthSpectrum):
            raise DomainError("the oracle needs a LengthSpectrum")
        if not ground_truth.certified:
            raise DomainError("the oracle's spectrum must be certified")
        self.ground_truth = ground_truth
        self.match_tolerance = (
            ground_truth.merge_tolerance if match_tolerance is None else check_positive(match_tolerance, "match_tolerance")
        )
        self.questions_asked = 0
        self._values = ground_truth.lengths()
        self._lock = threading.Lock()

    @property
    def cutoff(self):
        return self.ground_truth.cutoff

    def answer(self, question):
        if not isinstance(question, AdmissibleQuestion):
            question = AdmissibleQuestion(tuple(question))
        with self._lock:
            value = first_remaining(self._values, question.exclusions, self.match_tolerance)
            if value is None:
                raise CutoffExceeded(
                    f"no value of the spectrum survives the exclusions below cutoff {self.cutoff}"
                )
            self.questions_asked += 1
            return value


def first_remaining(values, exclusions, tol):
    """Smallest entry of sorted ``values`` left after multiset removal of ``exclusions``."""
    removed = np.zeros(len(values), dtype=bool)
    for v in sorted(exclusions):
        lo = np.searchsorted(values, v - tol, side="left")
        hi = np.searchsorted(values, v + tol, side="right")
        for j in range(lo, hi):
            if not removed[j]:
                removed[j] = True
                break
    free = np.nonzero(~removed)[0]
    return float(values[free[0]]) if len(free) else None


def ask(oracle, question):
    """First value of the oracle's spectrum minus the exclusion multiset."""
    return oracle.answer(question)


def initial_sweep(oracle, n):
    """The first ``n`` values of the spectrum, using exactly ``n`` questions."""
    n = check_int(n, "n", minimum=0)
    revealed = []
    for _ in range(n):
        revealed.append(ask(oracle, AdmissibleQuestion(tuple(revealed))))
    return revealed


@dataclass(frozen=True)
class CandidateFamily:
    """Labelled candidate spectra, all known to the same cutoff."""

    members: Mapping

    def __post_init__(self):
        members = dict(self.members)
        if not members:
            raise DomainError("a candidate family cannot be empty")
        cutoffs = {round(s.cutoff, 12) for s in members.values()}
        if len(cutoffs) != 1:
            raise DomainError(f"candidates must share one cutoff, got {sorted(cutoffs)}")
        for label, s in members.items():
            if not isinstance(s, LengthSpectrum):
                raise DomainError(f"member {label!r} is not a LengthSpectrum")
        object.__setattr__(self, "members", members)

    @property
    def cutoff(self):
        return next(iter(self.members.values())).cutoff

    def labels(self):
        return list(self.members)


def first_difference(sx, sy, cutoff, tol):
    """1-based index of the first differing expanded length, or None."""
    same, index = isospectral_compare(sx, sy, cutoff, tol)
    return None if same else index


def eliminate_pair(oracle, sx, sy, labels=("X", "Y"), tol=None):
    """Ask one question separating ``sx`` from ``sy``; return the labels it rules out.

    The question excludes the first ``m - 1`` values of ``sx`` (which agree
    with ``sy``), where ``m`` is the first index at which they differ, so its
    answer is the ``m``-th value of the hidden spectrum.
    """
    tol = oracle.match_tolerance if tol is None else tol
    cutoff = min(sx.cutoff, sy.cutoff, oracle.cutoff)
    m = first_difference(sx, sy, cutoff, tol)
    if m is None:
        raise Indistinguishable(f"{labels[0]} and {labels[1]} agree up to {cutoff}")
    ax, ay = sx.lengths(cutoff), sy.lengths(cutoff)
    answer = ask(oracle, AdmissibleQuestion(tuple(ax[: m - 1])))
    out = []
    for label, values in ((labels[0], ax), (labels[1], ay)):
        expected = values[m - 1] if len(values) >= m else math.inf
        if not abs(answer - expected) <= tol:
            out.append(label)
    return tuple(out), m, answer


@dataclass
class Transcript:
    questions: list = field(default_factory=list)
    eliminations: list = field(default_factory=list)
    winner: str | None = None
    winners: tuple = ()

    @property
    def total_questions(self):
        return len(self.questions)

    def to_dict(self):
        return {
            "questions": self.questions,
            "eliminations": self.eliminations,
            "winner": self.winner,
            "winners": list(self.winners),
            "total_questions": self.total_questions,
        }


class _RecordingOracle:
    """Wraps an oracle so every answered question lands in a transcript."""

    def __init__(self, oracle, transcript):
        self._oracle = oracle
        self._transcript = transcript
        self.match_tolerance = oracle.match_tolerance
        self.cutoff = oracle.cutoff

    def answer(self, question):
        if not isinstance(question, AdmissibleQuestion):
            question = AdmissibleQuestion(tuple(question))
        value = self._oracle.answer(question)
        self._transcript.questions.append({"exclusions_count": len(question.exclusions), "answer": value})
        return value


def group_isospectral(family, tol):
    """Partition labels into classes of mutually isospectral members (order kept)."""
    groups = []
    for label, s in family.members.items():
        for g in groups:
            if isospectral_compare(family.members[g[0]], s, family.cutoff, tol)[0]:
                g.append(label)
                break
        else:
            groups.append([label])
    return groups


def identify(oracle, family, sweep_size=0):
    """Find the family member whose spectrum is the oracle's.

    Sweep the first ``sweep_size`` values, discard members inconsistent with
    them, group the rest by spectrum, then eliminate pairwise. Uses at most
    ``sweep_size + (number of distinct spectra - 1)`` questions.
    """
    if not isinstance(family, CandidateFamily):
        family = CandidateFamily(family)
    sweep_size = check_int(sweep_size, "sweep_size", minimum=0)
    transcript = Transcript()
    rec = _RecordingOracle(oracle, transcript)
    tol = oracle.match_tolerance
    cutoff = min(family.cutoff, oracle.cutoff)

    swept = np.array(initial_sweep(rec, sweep_size))
    alive = {}
    for label, s in family.members.items():
        head = s.lengths(cutoff)[:sweep_size]
        if len(head) == len(swept) and np.all(np.abs(head - swept) <= tol):
            alive[label] = s
        else:
            transcript.eliminations.append({"stage": "sweep", "ruled_out": [label]})

    groups = group_isospectral(CandidateFamily(alive), tol) if alive else []
    while len(groups) > 1:
        gx, gy = groups[0], groups[1]
        ruled, m, answer = eliminate_pair(
            rec, family.members[gx[0]], family.members[gy[0]], (gx[0], gy[0]), tol
        )
        out = []
        for g in (gx, gy):
            if g[0] in ruled:
                groups.remove(g)
                out.extend(g)
        transcript.eliminations.append(
            {"stage": "pair", "pair": [gx[0], gy[0]], "index": m, "ruled_out": out}
        )
    if not groups:
        raise NoCandidateMatches("every candidate was ruled out")
    transcript.winners = tuple(groups[0])
    transcript.winner = groups[0][0]
    return transcript.winner, transcript


class Interrogator(BaseEstimator):
    """Estimator form of :func:`identify`.

    ``fit(family)`` stores the candidates; ``predict(spectra)`` interrogates
    a fresh oracle for each hidden spectrum and returns the winning labels.
    """

    def __init__(self, sweep_size=0, match_tolerance=None):
        self.sweep_size = sweep_size
        self.match_tolerance = match_tolerance

    def fit(self, family, y=None):
        self.family_ = family if isinstance(family, CandidateFamily) else CandidateFamily(family)
        self.labels_ = self.family_.labels()
        return self

    def interrogate(self, spectrum):
        check_is_fitted(self, "family_")
        oracle = SpectrumOracle(spectrum, self.match_tolerance)
        return identify(oracle, self.family_, self.sweep_size)

    def predict(self, spectra):
        if isinstance(spectra, LengthSpectrum):
            spectra = [spectra]
        self.transcripts_ = [self.interrogate(s)[1] for s in spectra]
        return np.array([t.winner for t in self.transcripts_], dtype=object)


__all__ = [
    "AdmissibleQuestion",
    "SpectrumOracle",
    "CandidateFamily",
    "Transcript",
    "ask",
    "initial_sweep",
    "eliminate_pair",
    "group_isospectral",
    "identify",
    "Interrogator",
]
