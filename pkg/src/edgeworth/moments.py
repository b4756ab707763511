"""Input data model: moment profiles and regularity assumptions.

A MomentProfile carries the sample size and the standardized moments
(K3, K3tilde, lambda3, K4) every bound consumes; construction validates
the moment inequalities the bounds rely on.  A RegularityAssumption
selects between the moment-only theorem and the characteristic-function
tail corollaries.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

from . import kernel
from .errors import InvalidProfileError, SettingMismatchError

# Sharpest published |lambda3| <= c * K3 relation; also the worst-case
# default when only K4 is known.  Two-point laws can exceed it, so the
# check is bypassable (the exact-moment oracle uses the bypass).
PINELIS_RATIO = 0.621

_REL_SLACK = 1e-9  # float fuzz allowance on derived-moment inequalities


@dataclass(frozen=True)
class MomentProfile:
    n: int
    K4: float
    K3: float
    K3_tilde: float
    lambda3: float
    setting: str  # "inid" | "iid"
    no_skew: bool = False

    @property
    def regime(self) -> str:
        return f"{self.setting}_{'noskew' if self.no_skew else 'skew'}"

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n, "K4": self.K4, "K3": self.K3,
            "K3_tilde": self.K3_tilde, "lambda3": self.lambda3,
            "setting": self.setting, "no_skew": self.no_skew,
        })

    @staticmethod
    def from_json(text: str) -> "MomentProfile":
        data = json.loads(text)
        known = {"n", "K4", "K3", "K3_tilde", "lambda3", "setting", "no_skew"}
        extra = set(data) - known
        if extra:
            raise InvalidProfileError(f"unknown profile fields: {sorted(extra)}")
        missing = known - set(data)
        if missing:
            raise InvalidProfileError(f"missing profile fields: {sorted(missing)}")
        return make_profile(
            n=data["n"], K4=data["K4"], K3=data["K3"],
            K3_tilde=data["K3_tilde"], lambda3=data["lambda3"],
            setting=data["setting"], no_skew=data["no_skew"],
        )


def make_profile(n: int, K4: float, K3: float | None = None,
                 K3_tilde: float | None = None, lambda3: float | None = None,
                 setting: str = "iid", no_skew: bool = False,
                 unchecked_skewness: bool = False) -> MomentProfile:
    """Build a validated profile, filling unknown moments with their
    worst-case defaults: K3 = K4^(3/4), K3tilde = 2*K3 (inid) or K3+1
    (iid), |lambda3| = 0.621*K3 unless no_skew.

    unchecked_skewness bypasses the 0.621 ratio check only (two-point laws
    violate it); |lambda3| <= K3 always remains a hard error.
    """
    if setting not in ("inid", "iid"):
        raise InvalidProfileError(f"setting must be 'inid' or 'iid', got {setting!r}")
    if not float(n).is_integer() or n < 3:
        raise InvalidProfileError(f"sample size invariant violated: need integer n >= 3, got {n}")
    n = int(n)
    if not K4 > 0.0:
        raise InvalidProfileError(f"kurtosis invariant violated: need K4 > 0, got {K4}")

    if K3 is None:
        K3 = K4 ** 0.75
    if K3_tilde is None:
        K3_tilde = 2.0 * K3 if setting == "inid" else K3 + 1.0
    if lambda3 is None:
        lambda3 = 0.0 if no_skew else PINELIS_RATIO * K3

    if no_skew and lambda3 != 0.0:
        raise InvalidProfileError(
            f"no_skew invariant violated: lambda3 must be 0, got {lambda3}")
    if not 1.0 - _REL_SLACK <= K3:
        raise InvalidProfileError(f"K3 >= 1 invariant violated: got K3={K3}")
    if K3 > K4 ** 0.75 * (1.0 + _REL_SLACK):
        raise InvalidProfileError(
            f"K3 <= K4^(3/4) invariant violated: K3={K3}, K4^(3/4)={K4 ** 0.75}")
    if abs(lambda3) > K3 * (1.0 + _REL_SLACK):
        raise InvalidProfileError(
            f"|lambda3| <= K3 invariant violated: lambda3={lambda3}, K3={K3}")
    if not unchecked_skewness and abs(lambda3) > PINELIS_RATIO * K3 * (1.0 + _REL_SLACK):
        raise InvalidProfileError(
            f"|lambda3| <= 0.621*K3 invariant violated: lambda3={lambda3}, "
            f"bound={PINELIS_RATIO * K3} (pass unchecked_skewness=True to bypass)")
    hi = 2.0 * K3 if setting == "inid" else K3 + 1.0
    if not (K3 * (1.0 - _REL_SLACK) <= K3_tilde <= hi * (1.0 + _REL_SLACK)):
        raise InvalidProfileError(
            f"K3 <= K3_tilde <= {'2*K3' if setting == 'inid' else 'K3+1'} "
            f"invariant violated: K3={K3}, K3_tilde={K3_tilde}")

    return MomentProfile(n=n, K4=float(K4), K3=float(K3),
                         K3_tilde=float(K3_tilde), lambda3=float(lambda3),
                         setting=setting, no_skew=bool(no_skew))


@dataclass(frozen=True)
class RegularityAssumption:
    """none | polynomial char-function tail (C0, p) | iid char-function sup."""

    kind: str  # "moment_only" | "polynomial_tail" | "iid_char_sup"
    C0: float = 0.0
    p: float = 0.0
    kappa: float = 0.0

    @staticmethod
    def none() -> "RegularityAssumption":
        return RegularityAssumption("moment_only")

    @staticmethod
    def polynomial_tail(C0: float, p: float) -> "RegularityAssumption":
        if not (C0 > 0.0 and p > 0.0):
            raise SettingMismatchError(
                f"polynomial_tail requires C0 > 0 and p > 0, got C0={C0}, p={p}")
        return RegularityAssumption("polynomial_tail", C0=C0, p=p)

    @staticmethod
    def iid_char_sup(kappa: float) -> "RegularityAssumption":
        if not 0.0 < kappa <= 1.0:
            raise SettingMismatchError(
                f"iid_char_sup requires kappa in (0, 1], got {kappa}")
        return RegularityAssumption("iid_char_sup", kappa=kappa)

    def check_against(self, profile: MomentProfile) -> None:
        if self.kind == "iid_char_sup" and profile.setting != "iid":
            raise SettingMismatchError(
                "iid_char_sup regularity requires an iid profile")


@dataclass(frozen=True)
class DerivedQuantities:
    a_n: float
    b_n: float
    c_n: float
    tau: float
    T_moment: float
    T_regular: float
    Delta: float


def derived_quantities(profile: MomentProfile, eps: float = 0.1) -> DerivedQuantities:
    """Window endpoints, truncation radii, and the branch discriminant
    entering the remainders; chi1 / t1* come from the kernel module."""
    n = profile.n
    kt = profile.K3_tilde
    sqrt_n = math.sqrt(n)
    a_first = 2.0 * kernel.T1_STAR * math.pi * sqrt_n / kt
    a_second = 16.0 * math.pi ** 3 * n * n / kt ** 4
    b_n = 16.0 * math.pi ** 4 * n * n / kt ** 4
    a_n = min(a_first, a_second)
    tau = math.sqrt(2.0 * eps) * (n / profile.K4) ** 0.25
    T_moment = 2.0 * math.pi * sqrt_n / kt
    delta = 0.5 * (1.0 - 4.0 * kernel.CHI1 - math.sqrt(profile.K4 / n))
    return DerivedQuantities(a_n=a_n, b_n=b_n, c_n=b_n / a_n, tau=tau,
                             T_moment=T_moment, T_regular=b_n, Delta=delta)


def profile_to_dict(profile: MomentProfile) -> dict[str, Any]:
    return json.loads(profile.to_json())
