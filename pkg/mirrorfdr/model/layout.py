"""
Mapping between named constrained parameters and the flat unconstrained
vector ADVI works on.

Transforms:
    free           x = u                 log|dx/du| = 0
    positive       x = exp(u)            log|dx/du| = u
    unit_interval  x = logistic(u)       log|dx/du| = log x + log(1 - x)
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Literal, Mapping, Tuple

import numpy as np
from scipy.special import expit, logit

from ..config import ModelSpec
from ..errors import ModelError

Constraint = Literal["free", "positive", "unit_interval"]
CONSTRAINTS = ("free", "positive", "unit_interval")


@dataclass(frozen=True)
class ParamEntry:
    name: str
    size: int
    constraint: Constraint
    offset: int = 0

    @property
    def slice(self) -> slice:
        return slice(self.offset, self.offset + self.size)


class ParameterLayout:
    """Ordered (name, size, constraint) entries packed into one vector."""

    def __init__(self, entries: Iterable[Tuple[str, int, Constraint]]):
        packed: List[ParamEntry] = []
        offset = 0
        for name, size, constraint in entries:
            if constraint not in CONSTRAINTS:
                raise ModelError(f"unknown constraint {constraint!r} for {name}")
            if size < 1:
                raise ModelError(f"parameter {name} must have positive size")
            if any(e.name == name for e in packed):
                raise ModelError(f"parameter {name} appears twice in the layout")
            packed.append(ParamEntry(name, int(size), constraint, offset))
            offset += int(size)
        self.entries: Tuple[ParamEntry, ...] = tuple(packed)
        self.dim = offset
        self._by_name = {e.name: e for e in self.entries}

    def __iter__(self) -> Iterator[ParamEntry]:
        return iter(self.entries)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __getitem__(self, name: str) -> ParamEntry:
        return self._by_name[name]

    def __eq__(self, other) -> bool:
        return isinstance(other, ParameterLayout) and self.to_list() == other.to_list()

    def __repr__(self) -> str:
        body = ", ".join(f"{e.name}[{e.size}]:{e.constraint}" for e in self.entries)
        return f"ParameterLayout({body}; dim={self.dim})"

    @property
    def names(self) -> List[str]:
        return [e.name for e in self.entries]

    def coordinate_names(self) -> List[str]:
        """Human-readable name per unconstrained coordinate, e.g. `lambda[3]`."""
        return [
            e.name if e.size == 1 else f"{e.name}[{i}]"
            for e in self.entries
            for i in range(e.size)
        ]

    def to_list(self) -> List[Tuple[str, int, str]]:
        return [(e.name, e.size, e.constraint) for e in self.entries]

    @classmethod
    def from_list(cls, entries: Iterable[Iterable]) -> "ParameterLayout":
        return cls((str(name), int(size), str(constraint)) for name, size, constraint in entries)


@dataclass
class ParameterSet:
    """Named constrained values; arrays are (size,) or batched (S, size)."""
    values: Dict[str, np.ndarray] = field(default_factory=dict)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.values[name]

    def __contains__(self, name: str) -> bool:
        return name in self.values

    def get(self, name: str, default=None):
        return self.values.get(name, default)

    def names(self) -> List[str]:
        return list(self.values)


def layout_for(model: ModelSpec, data_shape: Tuple[int, int, int]) -> ParameterLayout:
    """
    Parameter layout for a model on data with n subjects, p covariates and M measurements.

    Raises:
        ModelError: unknown family or non-positive shapes
    """
    n, p, M = data_shape
    if n < 1 or p < 1 or M < 1:
        raise ModelError(f"data shape must be positive, got {data_shape}")
    kind = model.prior.kind
    if kind == "horseshoe":
        entries = [("beta", p, "free"), ("lambda", p, "positive"), ("tau", 1, "positive")]
    elif kind == "product":
        entries = [("eta", p, "free"), ("lambda", p, "unit_interval"), ("tau", 1, "positive")]
    elif kind == "normal":
        entries = [("beta", p, "free")]
    else:
        raise ModelError(f"unknown prior {kind}")

    entries.append(("beta0", 1, "free"))
    if model.family not in ("linear", "random_intercept", "logistic", "poisson"):
        raise ModelError(f"unknown family {model.family}")
    if model.has_sigma_y:
        entries.append(("sigma_y", 1, "positive"))
    if model.family == "random_intercept":
        entries.append(("beta0_random", n, "free"))
    return ParameterLayout(entries)


def _forward(constraint: str, u: np.ndarray):
    """Constrained value, log-Jacobian, dx/du and d(log-Jacobian)/du for one block."""
    if constraint == "free":
        return u, np.zeros_like(u), np.ones_like(u), np.zeros_like(u)
    if constraint == "positive":
        x = np.exp(u)
        return x, u, x, np.ones_like(u)
    x = expit(u)
    # log x + log(1 - x) evaluated in a form that stays finite for large |u|
    log_jac = -np.logaddexp(0.0, -u) - np.logaddexp(0.0, u)
    return x, log_jac, x * (1.0 - x), 1.0 - 2.0 * x


def constrain(u: np.ndarray, layout: ParameterLayout):
    """
    Forward transform with derivatives.

    Returns:
        (ParameterSet, log_jacobian, dx_du per name, dlogjac_du as a flat array)
    """
    u = np.asarray(u, dtype=float)
    if u.shape[-1] != layout.dim:
        raise ModelError(f"expected {layout.dim} unconstrained values, got {u.shape[-1]}")
    values: Dict[str, np.ndarray] = {}
    dx_du: Dict[str, np.ndarray] = {}
    log_jac = np.zeros(u.shape[:-1])
    dlogjac = np.zeros_like(u)
    for entry in layout:
        block = u[..., entry.slice]
        x, lj, dx, dlj = _forward(entry.constraint, block)
        values[entry.name] = x
        dx_du[entry.name] = dx
        log_jac = log_jac + lj.sum(axis=-1)
        dlogjac[..., entry.slice] = dlj
    return ParameterSet(values), log_jac, dx_du, dlogjac


def to_constrained(u: np.ndarray, layout: ParameterLayout):
    """Map unconstrained u to (ParameterSet, log_jacobian)."""
    params, log_jac, _, _ = constrain(u, layout)
    return params, log_jac


def to_unconstrained(params: Mapping[str, np.ndarray], layout: ParameterLayout) -> np.ndarray:
    """Inverse of to_constrained."""
    if isinstance(params, ParameterSet):
        params = params.values
    missing = [e.name for e in layout if e.name not in params]
    if missing:
        raise ModelError(f"missing parameters {missing}")
    blocks = []
    for entry in layout:
        x = np.atleast_1d(np.asarray(params[entry.name], dtype=float))
        if entry.constraint == "free":
            blocks.append(x)
        elif entry.constraint == "positive":
            blocks.append(np.log(x))
        else:
            blocks.append(logit(x))
    shapes = {b.shape[:-1] for b in blocks}
    if len(shapes) != 1:
        raise ModelError("parameter blocks have inconsistent batch shapes")
    return np.concatenate(blocks, axis=-1)
