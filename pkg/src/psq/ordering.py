"""Quantization choice: the sigma parameter plus a smoother automorphism S.

A smoother is an invertible map on phase-space functions that fixes x and p
and commutes with integration.  Supported kinds:

* Identity
* GaussianAlphaBeta(alpha, beta): Fourier multiplier
  exp(-(alpha xi^2 + beta eta^2) / 2 hbar) in the forward direction
* CohenMultiplier(F): general Fourier-multiplier smoother whose *inverse*
  applies F(xi, eta); admissibility F(0,0)=1 and grad F(0,0)=0 is checked
  numerically at the lattice origin on first use
* DiffOpWord: a grading-decreasing differential-operator word; exact on
  polynomials, not applicable to sampled fields.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import PSQError, UnsupportedObservableError
from .polyalg import DiffOpWord


class IdentitySmoother:
    kind = "identity"

    def multiplier(self, XI, ETA, hbar):
        return np.ones(np.broadcast(XI, ETA).shape)

    def conjugated(self):
        return self

    def to_word(self):
        return DiffOpWord.identity()

    def is_identity(self):
        return True

    def as_dict(self):
        return {"kind": "identity"}

    def __eq__(self, other):
        return isinstance(other, IdentitySmoother)


@dataclass(frozen=True)
class GaussianSmoother:
    """S_{alpha,beta} = exp(hbar alpha d_x^2 / 2 + hbar beta d_p^2 / 2)."""

    alpha: float
    beta: float
    kind = "gaussian"

    def multiplier(self, XI, ETA, hbar):
        return np.exp(-(self.alpha * XI ** 2 + self.beta * ETA ** 2) / (2.0 * hbar))

    def conjugated(self):
        # real, reflection-symmetric multiplier: Sbar = S
        return self

    def to_word(self):
        return DiffOpWord.gaussian(self.alpha, self.beta)

    def is_identity(self):
        return self.alpha == 0.0 and self.beta == 0.0

    def as_dict(self):
        return {"kind": "gaussian", "alpha": self.alpha, "beta": self.beta}


class CohenSmoother:
    """Smoother defined through the multiplier F(xi, eta) of its inverse."""

    kind = "cohen"

    def __init__(self, fn, label="cohen"):
        self.fn = fn
        self.label = label
        self._checked = False

    def _admissibility(self, dxi, deta, hbar):
        """F(0,0) = 1 and grad F(0,0) = 0, finite differences at the origin."""
        f00 = complex(self.fn(0.0, 0.0))
        if abs(f00 - 1.0) > 1e-10:
            raise PSQError("Cohen multiplier violates F(0,0)=1: F(0,0)=%r" % f00)
        gx = (complex(self.fn(dxi, 0.0)) - complex(self.fn(-dxi, 0.0))) / (2 * dxi)
        gy = (complex(self.fn(0.0, deta)) - complex(self.fn(0.0, -deta))) / (2 * deta)
        scale = max(abs(dxi), abs(deta))
        if max(abs(gx), abs(gy)) * scale > 1e-8:
            raise PSQError("Cohen multiplier violates grad F(0,0)=0")
        self._checked = True

    def multiplier(self, XI, ETA, hbar):
        if not self._checked:
            xi1 = XI[XI > 0].min() if np.any(XI > 0) else 1.0
            eta1 = ETA[ETA > 0].min() if np.any(ETA > 0) else 1.0
            self._admissibility(xi1, eta1, hbar)
        vals = np.asarray(self.fn(XI, ETA), dtype=complex)
        # forward smoother multiplier = 1/F; invertibility on lattice assumed
        if np.any(vals == 0):
            raise PSQError("Cohen multiplier vanishes on the lattice")
        return 1.0 / vals

    def conjugated(self):
        fn = self.fn
        return CohenSmoother(lambda XI, ETA: np.conj(fn(-np.asarray(XI), -np.asarray(ETA))),
                             label=self.label + "_bar")

    def to_word(self):
        raise UnsupportedObservableError(
            "Cohen smoother has no exact polynomial word")

    def is_identity(self):
        return False

    def as_dict(self):
        return {"kind": "cohen", "label": self.label}


class WordSmoother:
    """Differential-operator-word smoother; exact symbolic use only."""

    kind = "word"

    def __init__(self, word):
        self.word = word

    def multiplier(self, XI, ETA, hbar):
        raise UnsupportedObservableError(
            "word smoothers act on polynomials, not sampled fields")

    def conjugated(self):
        return WordSmoother(self.word.conjugated())

    def to_word(self):
        return self.word

    def is_identity(self):
        return self.word.is_identity()

    def as_dict(self):
        return {"kind": "word"}


@dataclass(frozen=True)
class OrderingSpec:
    """sigma plus smoother; sigma_bar = 1 - sigma is always derived."""

    sigma: float = 0.5
    smoother: object = field(default_factory=IdentitySmoother)

    def __post_init__(self):
        if not np.isfinite(self.sigma):
            raise PSQError("sigma must be finite")

    @property
    def sigma_bar(self):
        return 1.0 - self.sigma

    def conjugate_spec(self):
        """(sigma_bar, Sbar), the spec of the conjugated product."""
        return OrderingSpec(self.sigma_bar, self.smoother.conjugated())

    def is_plain_sigma(self):
        return self.smoother.is_identity()

    def as_dict(self):
        return {"sigma": self.sigma, "smoother": self.smoother.as_dict()}


def moyal_spec():
    return OrderingSpec(0.5, IdentitySmoother())


def spec_from_dict(d):
    sm = d.get("smoother", {"kind": "identity"})
    kind = sm.get("kind", "identity")
    if kind == "identity":
        smoother = IdentitySmoother()
    elif kind == "gaussian":
        smoother = GaussianSmoother(float(sm.get("alpha", 0.0)), float(sm.get("beta", 0.0)))
    else:
        raise PSQError("cannot build smoother kind %r from config" % kind)
    return OrderingSpec(float(d.get("sigma", 0.5)), smoother)
