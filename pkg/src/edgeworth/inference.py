"""One-sided-test applications: Edgeworth CDF, uninformative-size solver,
p-value brackets, and conservative/liberal classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from .bounds import BoundResult, bound_BE, bound_BE_shevtsova, bound_EE1
from .errors import DomainError, NotFoundError
from .moments import MomentProfile, RegularityAssumption, make_profile
from .specfun import norm_cdf, norm_pdf, std_normal_quantile

N_MAX_CAP = 10 ** 8
_SCAN_WINDOW = 64


class EdgeworthCdfValue(NamedTuple):
    value: float
    outside_unit_interval: bool


def edgeworth_cdf(x: float, profile: MomentProfile) -> EdgeworthCdfValue:
    """One-term Edgeworth expansion of the CDF of the standardized sum:
    Phi(x) plus the skewness correction lambda3 (1-x^2) phi(x) / (6 sqrt n).

    Not clipped: for extreme skewness/small n it can leave [0, 1], which
    the flag reports."""
    value = norm_cdf(x) + profile.lambda3 * (1.0 - x * x) * norm_pdf(x) \
        / (6.0 * math.sqrt(profile.n))
    return EdgeworthCdfValue(value, not 0.0 <= value <= 1.0)


@dataclass(frozen=True)
class BoundSpec:
    """Recipe for evaluating one named bound at any sample size: theorem
    selector, regularity, and the profile template (K4 cap plus optional
    explicit moments)."""

    theorem: str = "thm21"  # shevtsova | thm21 | cor31 | cor32
    setting: str = "iid"
    no_skew: bool = False
    K4: float = 9.0
    K3: float | None = None
    K3_tilde: float | None = None
    lambda3: float | None = None
    regularity: RegularityAssumption | None = None
    eps: float = 0.1
    target: str = "be"  # "ee" or "be"
    unchecked_skewness: bool = False

    def profile(self, n: int) -> MomentProfile:
        return make_profile(n=n, K4=self.K4, K3=self.K3,
                            K3_tilde=self.K3_tilde, lambda3=self.lambda3,
                            setting=self.setting, no_skew=self.no_skew,
                            unchecked_skewness=self.unchecked_skewness)

    def _regularity(self) -> RegularityAssumption | None:
        if self.regularity is not None:
            return self.regularity
        if self.theorem == "cor31":
            raise DomainError("cor31 needs a polynomial_tail regularity")
        if self.theorem == "cor32":
            raise DomainError("cor32 needs an iid_char_sup regularity")
        return RegularityAssumption.none()

    def evaluate(self, n: int) -> BoundResult:
        profile = self.profile(n)
        if self.theorem == "shevtsova":
            return bound_BE_shevtsova(profile)
        reg = self._regularity()
        if self.target == "ee":
            return bound_EE1(profile, reg, self.eps)
        return bound_BE(profile, reg, self.eps)

    def delta_n(self, n: int) -> float:
        """The Edgeworth-distance bound delta_n used by brackets/verdicts."""
        if self.theorem == "shevtsova":
            raise DomainError(
                "the baseline bound controls the Berry-Esseen distance only; "
                "brackets and verdicts need an Edgeworth-distance bound")
        profile = self.profile(n)
        return bound_EE1(profile, self._regularity(), self.eps).total


def n_max(alpha: float, spec: BoundSpec) -> int | None:
    """Largest n >= 3 at which the bound is uninformative (>= alpha).

    Doubling search first locates a size where the bound stays below alpha
    over a window of consecutive sizes (remainder terms make small-n bounds
    non-monotone), then a downward scan returns the last crossing.  None
    when even n = 3 is informative."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")

    def uninformative(n: int) -> bool:
        return spec.evaluate(n).total >= alpha

    def window_clear(n: int) -> bool:
        return not any(uninformative(n + k) for k in range(_SCAN_WINDOW))

    start = None
    n = 3
    for _ in range(64):
        if n > N_MAX_CAP:
            break
        if window_clear(n):
            start = n
            break
        n *= 2
    if start is None:
        raise NotFoundError(
            f"bound never stays below alpha={alpha} up to n={N_MAX_CAP}")
    for k in range(start - 1, 2, -1):
        if uninformative(k):
            return k
    return None


@dataclass(frozen=True)
class PValueBracket:
    lower: float
    upper: float
    center: float
    naive: float
    width: float
    raw_lower: float
    raw_upper: float
    clipped: bool

    def as_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper,
                "center": self.center, "naive": self.naive,
                "width": self.width, "raw_lower": self.raw_lower,
                "raw_upper": self.raw_upper, "clipped": self.clipped}


def pvalue_bracket(s_n: float, profile: MomentProfile,
                   spec: BoundSpec) -> PValueBracket:
    """Bracket on the exact one-sided p-value around the Edgeworth-corrected
    point; the naive value is the Gaussian p-value 1 - Phi(s_n)."""
    delta = spec.delta_n(profile.n)
    naive = 1.0 - norm_cdf(s_n)
    bias = profile.lambda3 * (1.0 - s_n * s_n) * norm_pdf(s_n) \
        / (6.0 * math.sqrt(profile.n))
    center = naive - bias
    raw_lower, raw_upper = center - delta, center + delta
    lower = min(max(raw_lower, 0.0), 1.0)
    upper = min(max(raw_upper, 0.0), 1.0)
    return PValueBracket(lower=lower, upper=upper, center=center, naive=naive,
                         width=raw_upper - raw_lower,
                         raw_lower=raw_lower, raw_upper=raw_upper,
                         clipped=(lower != raw_lower or upper != raw_upper))


@dataclass(frozen=True)
class DistortionVerdict:
    verdict: str  # conservative | liberal | indeterminate
    threshold: float
    x: float
    delta_n: float
    info: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "threshold": self.threshold,
                "x": self.x, "delta_n": self.delta_n, "info": self.info}


def classify_distortion_at(x: float, profile: MomentProfile,
                           spec: BoundSpec) -> DistortionVerdict:
    """Sign classification of P(S_n <= x) - Phi(x) from the Edgeworth
    bracket, for any comparison point x != +-1.

    liberal: the CDF is provably below Phi(x) (rejection exceeds nominal);
    conservative: provably above; otherwise indeterminate.  The reported
    threshold is the skewness cutoff 6 sqrt(n) delta_n / ((x^2-1) phi(x))."""
    if x == 1.0 or x == -1.0:
        raise DomainError("distortion threshold is infinite at x = +-1")
    delta = spec.delta_n(profile.n)
    lam = profile.lambda3
    n = profile.n
    threshold = 6.0 * math.sqrt(n) * delta / ((x * x - 1.0) * norm_pdf(x))
    # bias = lam (1-x^2) phi(x) / (6 sqrt n); CDF < Phi iff bias < -delta
    scale = (1.0 - x * x) * norm_pdf(x) / (6.0 * math.sqrt(n))
    bias = lam * scale
    if bias < -delta:
        verdict = "liberal"
    elif bias > delta:
        verdict = "conservative"
    else:
        verdict = "indeterminate"
    return DistortionVerdict(verdict=verdict, threshold=threshold, x=x,
                             delta_n=delta,
                             info={"bias": bias, "lambda3": lam})


def classify_distortion(alpha: float, profile: MomentProfile,
                        spec: BoundSpec) -> DistortionVerdict:
    """Verdict for the one-sided level-alpha test with rejection region
    {S_n > q(1-alpha)}; alpha <= 0.15 keeps |q| > 1."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    x = std_normal_quantile(1.0 - alpha)
    out = classify_distortion_at(x, profile, spec)
    info = dict(out.info)
    info["alpha"] = alpha
    return DistortionVerdict(verdict=out.verdict, threshold=out.threshold,
                             x=x, delta_n=out.delta_n, info=info)
